#include "tvd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "tvd/adaptive.hpp"
#include "tvd/allpass.hpp"
#include "tvd/baselines.hpp"
#include "tvd/csv.hpp"
#include "tvd/rng.hpp"
#include "tvd/signal_lab.hpp"

namespace tvd {

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Naap: return "naap";
        case Algorithm::Aap: return "aap";
        case Algorithm::Etde: return "etde";
        case Algorithm::Sun: return "sun";
    }
    return "?";
}

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::Constant: return "constant";
        case Scenario::SmallStep: return "small";
        case Scenario::LargeStep: return "large";
        case Scenario::Custom: return "custom";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "naap") return Algorithm::Naap;
    if (s == "aap") return Algorithm::Aap;
    if (s == "etde") return Algorithm::Etde;
    if (s == "sun") return Algorithm::Sun;
    throw std::invalid_argument("algorithm: unknown value '" + s + "'");
}

Scenario scenario_from_string(const std::string& s) {
    if (s == "constant") return Scenario::Constant;
    if (s == "small") return Scenario::SmallStep;
    if (s == "large") return Scenario::LargeStep;
    if (s == "custom") return Scenario::Custom;
    throw std::invalid_argument("scenario: unknown value '" + s + "'");
}

void ExperimentConfig::validate() const {
    if (k_max < 1) throw std::invalid_argument("k_max: must be >= 1");
    if (!(rate > 0.0)) throw std::invalid_argument("rate: must be > 0");
    if ((algorithm == Algorithm::Naap) && !(rate < 1.0 / 3.0))
        throw std::invalid_argument("rate: naap requires 0 < rho < 1/3");
    if (epsilon == 0.0)
        throw std::invalid_argument("epsilon: must be > 0 (omit for the default)");
    if (record_length < 2 * static_cast<std::size_t>(k_max) + 2)
        throw std::invalid_argument("record_length: too short for the latency window");
    if (burn_in + kEdgeTrim >= record_length)
        throw std::invalid_argument("burn_in: leaves no samples after edge trim");
    if (!(bandwidth > 0.0) || bandwidth > 3.14159265358979323846)
        throw std::invalid_argument("bandwidth: must be in (0, pi]");
    if (n_realizations < 1) throw std::invalid_argument("n_realizations: must be >= 1");

    const DelayProfile p = profile_for(*this);
    if (p.min_delay() < 0.0 || p.max_delay() > static_cast<double>(k_max))
        throw std::invalid_argument("profile: delays must stay within [0, k_max]");
}

DelayProfile profile_for(const ExperimentConfig& cfg) {
    const std::size_t len = cfg.record_length;
    const std::size_t t1 = len / 3;       // 8000 at the default length of 24000
    const std::size_t t2 = 2 * (len / 3);
    switch (cfg.scenario) {
        case Scenario::Constant:
            return DelayProfile::constant(cfg.constant_delay, len);
        case Scenario::SmallStep:
            return DelayProfile::piecewise(3.85, {{t1, 4.60}, {t2, 3.10}}, len);
        case Scenario::LargeStep:
            return DelayProfile::piecewise(3.85, {{t1, 6.35}, {t2, 1.35}}, len);
        case Scenario::Custom:
            return DelayProfile::piecewise(cfg.profile_initial, cfg.profile_steps, len);
    }
    throw std::invalid_argument("scenario: unknown value");
}

namespace {

void record_weights(RunTrace& trace, std::span<const double> w) {
    trace.weights.insert(trace.weights.end(), w.begin(), w.end());
}

}  // namespace

RunTrace run_realization(const ExperimentConfig& cfg, std::size_t realization_index) {
    cfg.validate();
    const DelayProfile profile = profile_for(cfg);
    const SensorPair pair = make_sensor_pair(cfg.record_length, cfg.bandwidth, profile,
                                             cfg.snr_db,
                                             derive_seed(cfg.base_seed, realization_index));

    const std::size_t k = static_cast<std::size_t>(cfg.k_max);
    const std::size_t n_end = cfg.record_length - k;  // first invalid index
    RunTrace trace;
    trace.start_n = k;
    const std::size_t count = n_end - k;
    trace.error.reserve(count);
    trace.squared_error.reserve(count);
    trace.delay_estimate.reserve(count);

    double trace_r_acc = 0.0;
    std::size_t steps = 0;

    auto push = [&trace](double e, double delay) {
        trace.error.push_back(e);
        trace.squared_error.push_back(e * e);
        trace.delay_estimate.push_back(delay);
    };

    switch (cfg.algorithm) {
        case Algorithm::Naap:
        case Algorithm::Aap: {
            NaapState state = cfg.algorithm == Algorithm::Naap
                                  ? make_naap_state(cfg.k_max, cfg.rate, cfg.epsilon)
                                  : make_aap_state(cfg.k_max, cfg.rate);
            if (cfg.track_weights) trace.n_weights = cfg.k_max;
            RegressorSet reg;
            for (std::size_t n = k; n < n_end; ++n) {
                fill_regressors(reg, pair.sensor1, pair.sensor2, n, cfg.k_max);
                trace_r_acc += residual_energy(reg);
                ++steps;
                const StepResult r = cfg.algorithm == Algorithm::Naap
                                         ? naap_step(state, reg)
                                         : aap_step(state, reg);
                if (r.diverged) {
                    trace.diverged = true;
                    trace.divergence_index = n;
                    break;
                }
                push(r.error, r.delay);
                if (cfg.track_weights) record_weights(trace, state.weights.weights);
            }
            break;
        }
        case Algorithm::Etde: {
            EtdeState state = make_etde_state(cfg.k_max, cfg.rate);
            const std::size_t p = k;
            for (std::size_t n = k; n < n_end; ++n) {
                std::span<const double> window(&pair.sensor1.samples[n - p], 2 * p + 1);
                const BaselineStepResult r = etde_step(state, window, pair.sensor2[n]);
                if (r.diverged) {
                    trace.diverged = true;
                    trace.divergence_index = n;
                    break;
                }
                push(r.error, r.delay);
            }
            break;
        }
        case Algorithm::Sun: {
            // Causal taps spanning delays 0..K, matching the filter contract.
            SunState state = make_sun_state(cfg.k_max + 1, cfg.rate);
            if (cfg.track_weights) trace.n_weights = cfg.k_max + 1;
            for (std::size_t n = k; n < n_end; ++n) {
                std::span<const double> window(&pair.sensor1.samples[n - k], k + 1);
                const BaselineStepResult r = sun_step(state, window, pair.sensor2[n]);
                if (r.diverged) {
                    trace.diverged = true;
                    trace.divergence_index = n;
                    break;
                }
                push(r.error, r.delay);
                if (cfg.track_weights) record_weights(trace, state.weights);
            }
            break;
        }
    }

    if (steps > 0) trace.mean_residual_energy = trace_r_acc / static_cast<double>(steps);
    return trace;
}

unsigned harness_threads() {
    if (const char* env = std::getenv("TVD_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

CampaignSummary run_campaign(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::size_t n_real = cfg.n_realizations;

    std::vector<RunTrace> traces(n_real);
    const unsigned n_threads = std::min<unsigned>(harness_threads(),
                                                  static_cast<unsigned>(n_real));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < n_real; ++i) traces[i] = run_realization(cfg, i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n_real) return;
                traces[i] = run_realization(cfg, i);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    const DelayProfile profile = profile_for(cfg);
    const std::size_t k = static_cast<std::size_t>(cfg.k_max);
    const std::size_t count = cfg.record_length - 2 * k;

    CampaignSummary s;
    s.start_n = k;
    s.n_realizations = n_real;
    s.mse.assign(count, 0.0);
    s.made.assign(count, 0.0);
    s.mean_delay.assign(count, 0.0);
    s.true_delay.resize(count);
    for (std::size_t t = 0; t < count; ++t) s.true_delay[t] = profile.at(k + t);

    int n_weights = 0;
    std::vector<double> w_sum, w_sumsq;

    std::size_t n_ok = 0;
    double trace_r_acc = 0.0;
    // Fixed ascending-index reduction keeps campaign output bit-reproducible
    // for any thread count.
    for (std::size_t i = 0; i < n_real; ++i) {
        const RunTrace& tr = traces[i];
        if (tr.diverged) {
            s.n_divergent += 1;
            continue;
        }
        ++n_ok;
        trace_r_acc += tr.mean_residual_energy;
        for (std::size_t t = 0; t < count; ++t) {
            s.mse[t] += tr.squared_error[t];
            const double err = std::abs(tr.delay_estimate[t] - s.true_delay[t]);
            s.made[t] += err;
            s.mean_delay[t] += tr.delay_estimate[t];
        }
        if (tr.n_weights > 0) {
            if (n_weights == 0) {
                n_weights = tr.n_weights;
                w_sum.assign(count * static_cast<std::size_t>(n_weights), 0.0);
                w_sumsq.assign(w_sum.size(), 0.0);
            }
            for (std::size_t j = 0; j < w_sum.size(); ++j) {
                w_sum[j] += tr.weights[j];
                w_sumsq[j] += tr.weights[j] * tr.weights[j];
            }
        }
    }

    if (n_ok == 0) throw CampaignFailure("campaign failed: all realizations diverged");

    const double inv = 1.0 / static_cast<double>(n_ok);
    for (std::size_t t = 0; t < count; ++t) {
        s.mse[t] *= inv;
        s.made[t] *= inv;
        s.mean_delay[t] *= inv;
    }
    if (n_weights > 0) {
        s.n_weights = n_weights;
        s.weight_mean.resize(w_sum.size());
        s.weight_sd.resize(w_sum.size());
        for (std::size_t j = 0; j < w_sum.size(); ++j) {
            const double m = w_sum[j] * inv;
            s.weight_mean[j] = m;
            s.weight_sd[j] = std::sqrt(std::max(0.0, w_sumsq[j] * inv - m * m));
        }
    }
    s.mean_trace_r = trace_r_acc * inv;
    s.instability_fraction = static_cast<double>(s.n_divergent) /
                             static_cast<double>(n_real);
    s.time_avg_made = time_avg_made(s.made, s.start_n, cfg.burn_in, cfg.record_length);
    return s;
}

std::vector<SweepEntry> learning_rate_sweep(const ExperimentConfig& cfg,
                                            std::span<const double> rates) {
    if (rates.empty()) throw std::invalid_argument("rates: must be non-empty");
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (!(rates[i] > 0.0)) throw std::invalid_argument("rates: must be positive");
        if (i > 0 && rates[i] <= rates[i - 1])
            throw std::invalid_argument("rates: must be ascending");
    }

    std::vector<SweepEntry> out;
    out.reserve(rates.size());
    for (double r : rates) {
        ExperimentConfig c = cfg;
        c.rate = r;
        SweepEntry entry;
        entry.rate = r;
        try {
            const CampaignSummary s = run_campaign(c);
            entry.time_avg_made = s.time_avg_made;
            entry.has_made = true;
            entry.unstable = s.instability_fraction > 0.5;
        } catch (const CampaignFailure&) {
            entry.unstable = true;
            entry.has_made = false;
        }
        out.push_back(entry);
    }
    return out;
}

std::vector<double> made_curve(std::span<const double> delay_estimates,
                               const DelayProfile& profile, std::size_t start_n) {
    if (start_n + delay_estimates.size() > profile.length())
        throw std::invalid_argument("made_curve: trace extends past the profile");
    std::vector<double> out(delay_estimates.size());
    for (std::size_t t = 0; t < out.size(); ++t) {
        out[t] = std::abs(delay_estimates[t] - profile.at(start_n + t));
    }
    return out;
}

double time_avg_made(std::span<const double> curve, std::size_t start_n,
                     std::size_t burn_in, std::size_t record_length) {
    if (record_length < kEdgeTrim) throw std::invalid_argument("time_avg_made: record too short");
    const std::size_t lo_n = std::max(burn_in, start_n);
    const std::size_t hi_n = record_length - kEdgeTrim;
    if (lo_n >= hi_n) throw std::invalid_argument("time_avg_made: empty averaging window");
    const std::size_t lo = lo_n - start_n;
    const std::size_t hi = std::min(hi_n - start_n, curve.size());
    if (lo >= hi) throw std::invalid_argument("time_avg_made: trace misaligned with window");
    double acc = 0.0;
    for (std::size_t t = lo; t < hi; ++t) acc += curve[t];
    return acc / static_cast<double>(hi - lo);
}

void write_curves_csv(const std::string& path, const CampaignSummary& s) {
    CsvWriter w(path);
    w.field(std::string("n"));
    w.field(std::string("mse"));
    w.field(std::string("made"));
    w.field(std::string("tau_mean"));
    w.field(std::string("tau_true"));
    for (int j = 1; j <= s.n_weights; ++j) w.field("w_mean_" + std::to_string(j));
    for (int j = 1; j <= s.n_weights; ++j) w.field("w_sd_" + std::to_string(j));
    w.end_row();
    const std::size_t nw = static_cast<std::size_t>(s.n_weights);
    for (std::size_t t = 0; t < s.mse.size(); ++t) {
        w.field(s.start_n + t);
        w.field(s.mse[t]);
        w.field(s.made[t]);
        w.field(s.mean_delay[t]);
        w.field(s.true_delay[t]);
        for (std::size_t j = 0; j < nw; ++j) w.field(s.weight_mean[t * nw + j]);
        for (std::size_t j = 0; j < nw; ++j) w.field(s.weight_sd[t * nw + j]);
        w.end_row();
    }
}

void write_summary_csv(const std::string& path, std::span<const SummaryRow> rows) {
    CsvWriter w(path);
    w.field(std::string("algorithm"));
    w.field(std::string("rate"));
    w.field(std::string("snr_db"));
    w.field(std::string("scenario"));
    w.field(std::string("time_avg_made"));
    w.field(std::string("instability_fraction"));
    w.end_row();
    for (const auto& r : rows) {
        w.field(r.algorithm);
        w.field(r.rate);
        w.field(r.snr_db);
        w.field(r.scenario);
        w.field(r.time_avg_made);
        w.field(r.instability_fraction);
        w.end_row();
    }
}

void write_sweep_csv(const std::string& path, std::span<const SweepEntry> entries) {
    CsvWriter w(path);
    w.field(std::string("rate"));
    w.field(std::string("time_avg_made"));
    w.field(std::string("unstable"));
    w.end_row();
    for (const auto& e : entries) {
        w.field(e.rate);
        // An empty field (never NaN) when no realization survived.
        w.field(e.has_made ? format_double(e.time_avg_made) : std::string());
        w.field(std::string(e.unstable ? "true" : "false"));
        w.end_row();
    }
}

}  // namespace tvd
