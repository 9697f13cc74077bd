#ifndef TVD_ADAPTIVE_HPP
#define TVD_ADAPTIVE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tvd/allpass.hpp"

namespace tvd {

// Weights whose magnitude exceeds this are treated as numerically unstable.
inline constexpr double kWeightOverflowLimit = 1e6;

enum class AdaptMode { Aap, Naap };

// Sequential state machine for the adaptive all-pass filter. Steps must be
// applied in sample order by one thread at a time; distinct states may run in
// parallel.
struct NaapState {
    ApCoefficients weights;
    AdaptMode mode = AdaptMode::Naap;
    double rate = 0.0;     // mu for AAP, rho for NAAP
    double epsilon = 0.0;  // NAAP regularizer
    double last_error = 0.0;
    double last_delay_estimate = 0.0;
    std::int64_t sample_index = 0;
};

double default_epsilon(int k_max);  // 1e-6 * K

// Throws std::invalid_argument on a bad rate (AAP: mu > 0; NAAP: 0 < rho < 1/3).
// epsilon = 0 is accepted for test use; production configs keep epsilon > 0.
NaapState make_aap_state(int k_max, double mu);
NaapState make_naap_state(int k_max, double rho, double epsilon = -1.0);

struct StepResult {
    double error = 0.0;
    double delay = 0.0;
    bool diverged = false;
};

// One update. On divergence (non-finite weight or |w| beyond the overflow
// limit) the step is rejected: the state keeps its previous weights and the
// result carries diverged = true. The delay estimate is recomputed from the
// updated weights and held at its previous value on a degenerate denominator.
StepResult aap_step(NaapState& state, const RegressorSet& reg);
StepResult naap_step(NaapState& state, const RegressorSet& reg);

// grad = -2 e(n) r(n) with e(n) = desired - residual . weights; exposed so
// tests can check it against finite differences of e(n)^2.
std::vector<double> gradient_of_cost(const ApCoefficients& weights,
                                     const RegressorSet& reg);

// 1 / (3 tr[R]); throws std::invalid_argument for trace_r <= 0.
double stability_bound(double trace_r);

// Time-average of ||r(n)||^2 over a window of regressor sets; a single-entry
// window gives the instantaneous energy used by the NAAP denominator.
double estimate_trace_r(std::span<const RegressorSet> window);

// mu tr[R] / (1 - mu tr[R]); throws std::domain_error when mu tr[R] >= 1.
double misadjustment(double mu, double trace_r);

struct ConvergenceDiagnostics {
    double trace_r = 0.0;
    double mu_max = 0.0;
    double misadjustment = 0.0;
    double mse_floor = 0.0;  // sigma_eta^2 of the desired-response noise, when known
    std::optional<double> weight_error_norm;  // ||w - a||, test-only
};

ConvergenceDiagnostics make_diagnostics(double trace_r, double mu, double noise_variance,
                                        std::optional<double> weight_error_norm = {});

}  // namespace tvd

#endif
