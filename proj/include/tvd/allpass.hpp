#ifndef TVD_ALLPASS_HPP
#define TVD_ALLPASS_HPP

#include <optional>
#include <vector>

#include "tvd/signal.hpp"

namespace tvd {

// Coefficients of the forward FIR filter in the all-pass ratio representation.
// The leading coefficient a0 = 1 is implicit; `weights` holds w1..wK. K also
// bounds the delay the filter can represent.
struct ApCoefficients {
    int k_max = 0;
    std::vector<double> weights;

    static ApCoefficients zeros(int k_max);
};

// Regressors at one sample index n:
//   x_minus = [s1(n-1), ..., s1(n-K)]   backward vector of sensor 1
//   x_plus  = [s2(n+1), ..., s2(n+K)]   forward vector of sensor 2
//   residual = x_minus - x_plus
//   desired  = s2(n) - s1(n)
struct RegressorSet {
    std::vector<double> x_minus;
    std::vector<double> x_plus;
    std::vector<double> residual;
    double desired = 0.0;
};

// Throws std::invalid_argument if k_max < 1, std::out_of_range unless
// n - k_max >= 0 and n + k_max < sensor2.length (the estimator needs a
// K-sample lookahead into sensor 2).
RegressorSet build_regressors(const Signal& sensor1, const Signal& sensor2,
                              std::size_t n, int k_max);

// Allocation-free variant for hot loops; same contract.
void fill_regressors(RegressorSet& out, const Signal& sensor1, const Signal& sensor2,
                     std::size_t n, int k_max);

// Direct delay read-out from the coefficients:
//   tau_hat = 2 * sum_k k*w_k / (1 + sum_k w_k).
// Returns nullopt when |1 + sum w_k| <= eps_den (degenerate coefficients);
// callers typically hold the previous estimate.
std::optional<double> delay_from_coefficients(const ApCoefficients& coeffs,
                                              double eps_den = 1e-9);

// y(n) = residual . weights. Throws std::invalid_argument on size mismatch.
double predict_output(const ApCoefficients& coeffs, const RegressorSet& reg);

double residual_energy(const RegressorSet& reg);  // ||r(n)||^2

}  // namespace tvd

#endif
