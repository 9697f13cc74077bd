#include "tvd/adaptive.hpp"

#include <cmath>
#include <stdexcept>

namespace tvd {

namespace {

bool weight_ok(double v) {
    return std::isfinite(v) && std::abs(v) <= kWeightOverflowLimit;
}

// Applies w += scale * r with overflow screening. When the update would leave
// the weights non-finite or beyond the overflow limit the state is left
// untouched and the step is reported as divergent. The delay estimate is
// refreshed from the accepted weights, holding the previous value when the
// read-out denominator is degenerate.
StepResult apply_update(NaapState& state, const RegressorSet& reg, double error,
                        double scale) {
    StepResult res;
    res.error = error;

    bool bad = !std::isfinite(error) || !std::isfinite(scale);
    auto& w = state.weights.weights;
    if (!bad) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (!weight_ok(w[i] + scale * reg.residual[i])) {
                bad = true;
                break;
            }
        }
    }
    if (bad) {
        res.diverged = true;
        res.delay = state.last_delay_estimate;
        return res;
    }

    for (std::size_t i = 0; i < w.size(); ++i) w[i] += scale * reg.residual[i];
    state.last_error = error;
    if (auto d = delay_from_coefficients(state.weights)) {
        state.last_delay_estimate = *d;
    }
    state.sample_index += 1;
    res.delay = state.last_delay_estimate;
    return res;
}

}  // namespace

double default_epsilon(int k_max) { return 1e-6 * static_cast<double>(k_max); }

NaapState make_aap_state(int k_max, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("aap: mu must be > 0");
    NaapState s;
    s.weights = ApCoefficients::zeros(k_max);
    s.mode = AdaptMode::Aap;
    s.rate = mu;
    return s;
}

NaapState make_naap_state(int k_max, double rho, double epsilon) {
    if (!(rho > 0.0) || !(rho < 1.0 / 3.0))
        throw std::invalid_argument("naap: rho must satisfy 0 < rho < 1/3");
    if (epsilon < 0.0) epsilon = default_epsilon(k_max);
    NaapState s;
    s.weights = ApCoefficients::zeros(k_max);
    s.mode = AdaptMode::Naap;
    s.rate = rho;
    s.epsilon = epsilon;
    return s;
}

StepResult aap_step(NaapState& state, const RegressorSet& reg) {
    if (state.mode != AdaptMode::Aap) throw std::invalid_argument("aap_step: state is not AAP");
    const double e = reg.desired - predict_output(state.weights, reg);
    return apply_update(state, reg, e, 2.0 * state.rate * e);
}

StepResult naap_step(NaapState& state, const RegressorSet& reg) {
    if (state.mode != AdaptMode::Naap) throw std::invalid_argument("naap_step: state is not NAAP");
    const double e = reg.desired - predict_output(state.weights, reg);
    const double denom = residual_energy(reg) + state.epsilon;
    const double scale = denom > 0.0 ? state.rate * e / denom : 0.0;
    return apply_update(state, reg, e, scale);
}

std::vector<double> gradient_of_cost(const ApCoefficients& weights,
                                     const RegressorSet& reg) {
    const double e = reg.desired - predict_output(weights, reg);
    std::vector<double> grad(reg.residual.size());
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = -2.0 * e * reg.residual[i];
    return grad;
}

double stability_bound(double trace_r) {
    if (!(trace_r > 0.0))
        throw std::invalid_argument("stability_bound: trace_r must be > 0");
    return 1.0 / (3.0 * trace_r);
}

double estimate_trace_r(std::span<const RegressorSet> window) {
    if (window.empty()) throw std::invalid_argument("estimate_trace_r: empty window");
    double acc = 0.0;
    for (const auto& reg : window) acc += residual_energy(reg);
    return acc / static_cast<double>(window.size());
}

double misadjustment(double mu, double trace_r) {
    const double p = mu * trace_r;
    if (p >= 1.0)
        throw std::domain_error("misadjustment: mu * trace_r must be < 1");
    return p / (1.0 - p);
}

ConvergenceDiagnostics make_diagnostics(double trace_r, double mu, double noise_variance,
                                        std::optional<double> weight_error_norm) {
    ConvergenceDiagnostics d;
    d.trace_r = trace_r;
    d.mu_max = stability_bound(trace_r);
    d.misadjustment = misadjustment(mu, trace_r);
    d.mse_floor = noise_variance;
    d.weight_error_norm = weight_error_norm;
    return d;
}

}  // namespace tvd
