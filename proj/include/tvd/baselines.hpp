#ifndef TVD_BASELINES_HPP
#define TVD_BASELINES_HPP

#include <span>
#include <vector>

namespace tvd {

double dsinc(double x);  // d/dx sinc(x)

struct BaselineStepResult {
    double error = 0.0;
    double delay = 0.0;
    bool diverged = false;
};

// Explicit time delay estimator: a sinc interpolation filter whose single
// delay parameter is adapted by gradient descent on e^2.
//   y(n) = sum_{k=-P..P} sinc(k - D) s1(n-k)
//   D(n+1) = D(n) - 2 mu e(n) sum_k sinc'(k - D) s1(n-k)
struct EtdeState {
    double delay_estimate = 0.0;
    double mu = 0.0;
    int half_width = 0;  // P
};

EtdeState make_etde_state(int half_width, double mu);

// window[j] = s1(n - P + j) for j = 0..2P; desired = s2(n).
// Throws std::invalid_argument if the window size is not 2P + 1.
BaselineStepResult etde_step(EtdeState& state, std::span<const double> window,
                             double desired);

// Sun-Douglas style all-pass-constrained adaptive estimator: a causal FIR
// filter with taps t in [0, T-1] adapted by LMS plus a stochastic penalty
// holding the filter at unit DC gain (the all-pass condition at the frequency
// the delay is read from), with the delay extracted in closed form as the
// group delay at DC.
//   y(n) = sum_t w_t s1(n-t),  e = s2(n) - y
//   w_t <- w_t + 2 mu [e s1(n-t) + kappa (1 - sum_j w_j) / T]
//   D_hat = sum_t t w_t / sum_t w_t   (held when the denominator degenerates)
struct SunState {
    std::vector<double> weights;  // weights[j] multiplies window[j], tap delay T-1-j
    int n_taps = 0;               // T; estimable delays span [0, T-1]
    double mu = 0.0;
    double delay_estimate = 0.0;
};

// Starts from zero weights (delay estimate held at 0 until the DC gain
// forms); an all-zero window is a no-op step.
SunState make_sun_state(int n_taps, double mu);

// window[j] = s1(n - (T-1) + j) for j = 0..T-1; desired = s2(n).
BaselineStepResult sun_step(SunState& state, std::span<const double> window,
                            double desired);

}  // namespace tvd

#endif
