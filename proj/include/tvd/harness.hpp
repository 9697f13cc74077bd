#ifndef TVD_HARNESS_HPP
#define TVD_HARNESS_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tvd/signal.hpp"

namespace tvd {

enum class Algorithm { Naap, Aap, Etde, Sun };
enum class Scenario { Constant, SmallStep, LargeStep, Custom };

std::string to_string(Algorithm a);
std::string to_string(Scenario s);
Algorithm algorithm_from_string(const std::string& s);  // throws invalid_argument
Scenario scenario_from_string(const std::string& s);

struct ExperimentConfig {
    Algorithm algorithm = Algorithm::Naap;
    int k_max = 7;
    double rate = 0.01;        // rho for NAAP, mu otherwise
    double epsilon = -1.0;     // < 0 -> default_epsilon(k_max)
    // Long enough that each step-scenario segment reaches steady state even
    // at the slowest studied rates (rho = 0.01 re-converges in ~1e3 samples).
    std::size_t record_length = 24000;
    double bandwidth = 1.5707963267948966;  // pi/2
    double snr_db = 20.0;
    Scenario scenario = Scenario::Constant;
    double constant_delay = 5.85;
    // Custom scenario only; derived from the scenario otherwise.
    double profile_initial = 0.0;
    std::vector<DelayStep> profile_steps;
    std::size_t n_realizations = 100;
    std::uint64_t base_seed = 1;
    // Samples excluded from time-averaged metrics. Chosen together with
    // record_length when calibrating the summary-table reproduction; the
    // source material does not state either value.
    std::size_t burn_in = 250;
    bool track_weights = false;

    void validate() const;  // throws std::invalid_argument naming the field
};

// Step scenarios: initial delay 3.85, changes at one and two thirds of the
// record (8000 and 16000 at the default length).
//   small: +0.75 then -1.50   (3.85 -> 4.60 -> 3.10)
//   large: +2.50 then -5.00   (3.85 -> 6.35 -> 1.35)
DelayProfile profile_for(const ExperimentConfig& cfg);

struct RunTrace {
    std::size_t start_n = 0;  // first sample index with a valid update
    std::vector<double> error;
    std::vector<double> squared_error;
    std::vector<double> delay_estimate;
    std::vector<double> weights;  // row-major [t][k], only when tracked
    int n_weights = 0;
    bool diverged = false;
    std::size_t divergence_index = 0;
    double mean_residual_energy = 0.0;  // tr[R] estimate over the run
};

// Deterministic in (config.base_seed, realization_index). Divergence is
// recorded in the trace, not thrown; samples after the divergence index are
// dropped.
RunTrace run_realization(const ExperimentConfig& cfg, std::size_t realization_index);

struct CampaignSummary {
    std::size_t start_n = 0;
    std::vector<double> mse;         // ensemble-average e^2(n)
    std::vector<double> made;        // ensemble-average |tau_hat(n) - tau(n)|
    std::vector<double> mean_delay;  // ensemble-average tau_hat(n)
    std::vector<double> true_delay;  // tau(n)
    std::vector<double> weight_mean;  // row-major [t][k], when tracked
    std::vector<double> weight_sd;
    int n_weights = 0;
    double time_avg_made = 0.0;
    double instability_fraction = 0.0;
    std::size_t n_realizations = 0;
    std::size_t n_divergent = 0;
    double mean_trace_r = 0.0;
};

struct CampaignFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Aggregates n_realizations traces in ascending realization order (bit
// reproducible regardless of thread count). Divergent runs are excluded from
// the curves but counted in instability_fraction. Throws CampaignFailure when
// every realization diverged.
CampaignSummary run_campaign(const ExperimentConfig& cfg);

struct SweepEntry {
    double rate = 0.0;
    double time_avg_made = 0.0;
    bool unstable = false;     // instability fraction > 1/2
    bool has_made = false;     // false when no realization survived
};

std::vector<SweepEntry> learning_rate_sweep(const ExperimentConfig& cfg,
                                            std::span<const double> rates);

// Pointwise |tau_hat(n) - tau(n)| for estimates starting at sample start_n.
std::vector<double> made_curve(std::span<const double> delay_estimates,
                               const DelayProfile& profile, std::size_t start_n);

// Time average of a per-sample curve over [max(burn_in, start_n),
// record_length - kEdgeTrim), i.e. excluding burn-in and edge-trim regions.
double time_avg_made(std::span<const double> curve, std::size_t start_n,
                     std::size_t burn_in, std::size_t record_length);

// Worker count for campaign parallelism: TVD_THREADS, 0 or unset = auto.
unsigned harness_threads();

// --- output files -----------------------------------------------------------

// curves.csv: n, mse, made, tau_mean, tau_true [, w_mean_k..., w_sd_k...]
void write_curves_csv(const std::string& path, const CampaignSummary& s);
// summary.csv: algorithm, rate, snr_db, scenario, time_avg_made, instability_fraction
struct SummaryRow {
    std::string algorithm;
    double rate = 0.0;
    double snr_db = 0.0;
    std::string scenario;
    double time_avg_made = 0.0;
    double instability_fraction = 0.0;
};
void write_summary_csv(const std::string& path, std::span<const SummaryRow> rows);
// sweep.csv: rate, time_avg_made, unstable (empty made field when nothing survived)
void write_sweep_csv(const std::string& path, std::span<const SweepEntry> entries);

}  // namespace tvd

#endif
