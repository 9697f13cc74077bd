#include "tvd/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "tvd/adaptive.hpp"
#include "tvd/signal_lab.hpp"

namespace tvd {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Gain of the DC all-pass penalty in the Sun update, applied per tap.
constexpr double kSunDcGain = 3.0;

}  // namespace

double dsinc(double x) {
    if (std::abs(x) < 1e-4) {
        // Series around 0; the closed form cancels catastrophically there.
        return -kPi * kPi * x / 3.0 + std::pow(kPi, 4) * x * x * x / 30.0;
    }
    return (std::cos(kPi * x) - sinc(x)) / x;
}

EtdeState make_etde_state(int half_width, double mu) {
    if (half_width < 1) throw std::invalid_argument("etde: half_width must be >= 1");
    if (!(mu > 0.0)) throw std::invalid_argument("etde: mu must be > 0");
    EtdeState s;
    s.half_width = half_width;
    s.mu = mu;
    // Start in the middle of the estimable range [0, P]: the sinc error
    // surface only pulls toward the true delay within a couple of samples,
    // so a centered start keeps the usual delays inside the capture region.
    s.delay_estimate = static_cast<double>(half_width) / 2.0;
    return s;
}

BaselineStepResult etde_step(EtdeState& state, std::span<const double> window,
                             double desired) {
    const int p = state.half_width;
    if (window.size() != static_cast<std::size_t>(2 * p + 1))
        throw std::invalid_argument("etde_step: window size must be 2P + 1");

    const double d_hat = state.delay_estimate;
    const bool integer_d = d_hat == std::nearbyint(d_hat);
    // sin/cos(pi(k - D)) for all k from one evaluation at D.
    const double sin_pd = std::sin(kPi * d_hat);
    const double cos_pd = std::cos(kPi * d_hat);

    double y = 0.0;
    double slope = 0.0;  // sum_k sinc'(k - D) s1(n-k)
    for (int k = -p; k <= p; ++k) {
        const double v = static_cast<double>(k) - d_hat;
        const double sample = window[static_cast<std::size_t>(p - k)];  // s1(n-k)
        double sinc_v, dsinc_v;
        if (integer_d) {
            // Exact unit impulse at integer delays.
            const double parity = (k & 1) ? -1.0 : 1.0;
            sinc_v = v == 0.0 ? 1.0 : 0.0;
            dsinc_v = v == 0.0 ? 0.0 : parity * cos_pd / v;
        } else if (std::abs(v) < 1e-6) {
            const double pv = kPi * v;
            sinc_v = 1.0 - pv * pv / 6.0;
            dsinc_v = -kPi * kPi * v / 3.0;
        } else {
            const double parity = (k & 1) ? -1.0 : 1.0;
            sinc_v = -parity * sin_pd / (kPi * v);
            dsinc_v = (parity * cos_pd - sinc_v) / v;
        }
        y += sinc_v * sample;
        slope += dsinc_v * sample;
    }

    const double e = desired - y;
    const double candidate = d_hat - 2.0 * state.mu * e * slope;

    BaselineStepResult res;
    res.error = e;
    if (!std::isfinite(candidate) || std::abs(candidate) > kWeightOverflowLimit) {
        res.diverged = true;
        res.delay = state.delay_estimate;
        return res;
    }
    state.delay_estimate = candidate;
    res.delay = candidate;
    return res;
}

SunState make_sun_state(int n_taps, double mu) {
    if (n_taps < 2) throw std::invalid_argument("sun: n_taps must be >= 2");
    if (!(mu > 0.0)) throw std::invalid_argument("sun: mu must be > 0");
    SunState s;
    s.n_taps = n_taps;
    s.mu = mu;
    s.weights.assign(static_cast<std::size_t>(n_taps), 0.0);
    return s;
}

BaselineStepResult sun_step(SunState& state, std::span<const double> window,
                            double desired) {
    const std::size_t taps = static_cast<std::size_t>(state.n_taps);
    if (window.size() != taps)
        throw std::invalid_argument("sun_step: window size must equal n_taps");

    double y = 0.0;
    double dc_gain = 0.0;
    double in_energy = 0.0;
    for (std::size_t j = 0; j < taps; ++j) {
        y += state.weights[j] * window[j];
        dc_gain += state.weights[j];
        in_energy += window[j] * window[j];
    }
    const double e = desired - y;

    if (in_energy == 0.0 && desired == 0.0) {  // no input, nothing to adapt
        BaselineStepResult res;
        res.error = 0.0;
        res.delay = state.delay_estimate;
        return res;
    }

    // LMS step plus the all-pass DC-gain penalty spread over the taps. The
    // penalty pins the DC direction, which bandlimited input barely excites.
    const double two_mu = 2.0 * state.mu;
    const double pull = two_mu * kSunDcGain * (1.0 - dc_gain) / static_cast<double>(taps);
    bool bad = !std::isfinite(e);
    for (std::size_t j = 0; j < taps && !bad; ++j) {
        const double w = state.weights[j] + two_mu * e * window[j] + pull;
        if (!std::isfinite(w) || std::abs(w) > kWeightOverflowLimit) bad = true;
    }

    BaselineStepResult res;
    res.error = e;
    if (bad) {
        res.diverged = true;
        res.delay = state.delay_estimate;
        return res;
    }

    for (std::size_t j = 0; j < taps; ++j) {
        state.weights[j] += two_mu * e * window[j] + pull;
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < taps; ++j) {
        const double w = state.weights[j];
        num += static_cast<double>(taps - 1 - j) * w;  // tap delay T-1-j
        den += w;
    }
    if (std::abs(den) > 1e-9) state.delay_estimate = num / den;
    res.delay = state.delay_estimate;
    return res;
}

}  // namespace tvd
