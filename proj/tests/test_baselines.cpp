#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "tvd/baselines.hpp"
#include "tvd/harness.hpp"
#include "tvd/signal_lab.hpp"

using namespace tvd;

namespace {

constexpr double kPi = 3.14159265358979323846;

Signal shift_by(const Signal& x, std::size_t tau) {
    Signal out(x.length());
    for (std::size_t n = tau; n < x.length(); ++n) out[n] = x[n - tau];
    return out;
}

}  // namespace

TEST_CASE("etde: integer true delay is an exact fixed point") {
    const Signal x = generate_bandlimited_gaussian(256, kPi / 2, 3);
    const Signal s2 = shift_by(x, 3);
    EtdeState s = make_etde_state(7, 0.04);
    s.delay_estimate = 3.0;
    for (std::size_t n = 7; n + 7 < 200; ++n) {
        std::span<const double> window(&x.samples[n - 7], 15);
        const BaselineStepResult r = etde_step(s, window, s2[n]);
        REQUIRE(r.error == 0.0);
        REQUIRE(s.delay_estimate == 3.0);
    }
}

TEST_CASE("etde: the kernel at integer delay is the canonical unit impulse") {
    // desired = 0 makes e = -y, exposing y; at D = 2 the filter output must be
    // exactly the window sample two steps back.
    std::vector<double> window(15);
    std::mt19937_64 gen(5);
    for (auto& v : window) v = static_cast<double>(gen() % 1000) / 250.0 - 2.0;
    EtdeState s = make_etde_state(7, 1e-12);
    s.delay_estimate = 2.0;
    const BaselineStepResult r = etde_step(s, window, 0.0);
    CHECK(-r.error == window[7 - 2]);  // s1(n-k) lives at window[P - k]
}

TEST_CASE("etde: vanishing learning rate freezes the delay estimate") {
    const Signal x = generate_bandlimited_gaussian(256, kPi / 2, 4);
    const Signal s2 = shift_by(x, 2);
    EtdeState s = make_etde_state(7, 1e-300);
    s.delay_estimate = 4.3;
    for (std::size_t n = 7; n + 7 < 200; ++n) {
        std::span<const double> window(&x.samples[n - 7], 15);
        etde_step(s, window, s2[n]);
    }
    CHECK(s.delay_estimate == doctest::Approx(4.3).epsilon(1e-12));
}

TEST_CASE("etde: update direction matches finite differences of e^2") {
    std::mt19937_64 gen(11);
    auto uniform = [&](double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(gen() >> 11) * 0x1.0p-53;
    };
    const int p = 7;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> window(2 * p + 1);
        for (auto& v : window) v = uniform(-1.0, 1.0);
        const double desired = uniform(-2.0, 2.0);
        const double d_hat = uniform(0.3, 6.7);

        auto sq_err_at = [&](double d) {
            double y = 0.0;
            for (int k = -p; k <= p; ++k)
                y += sinc(static_cast<double>(k) - d) * window[static_cast<std::size_t>(p - k)];
            const double e = desired - y;
            return e * e;
        };

        const double mu = 0.01;
        EtdeState s = make_etde_state(p, mu);
        s.delay_estimate = d_hat;
        etde_step(s, window, desired);
        const double update = s.delay_estimate - d_hat;  // -mu * de^2/dD

        const double h = 1e-5;
        const double fd = (sq_err_at(d_hat + h) - sq_err_at(d_hat - h)) / (2.0 * h);
        const double expected = -mu * fd;
        const double denom = std::max({std::abs(update), std::abs(expected), 1e-12});
        REQUIRE(std::abs(update - expected) / denom < 1e-5);
    }
}

TEST_CASE("etde: non-finite input raises the divergence marker") {
    std::vector<double> window(15, 0.0);
    window[3] = std::numeric_limits<double>::infinity();
    EtdeState s = make_etde_state(7, 0.04);
    s.delay_estimate = 3.5;
    const BaselineStepResult r = etde_step(s, window, 1.0);
    CHECK(r.diverged);
    CHECK(s.delay_estimate == 3.5);  // state preserved
}

TEST_CASE("etde: converges near a constant fractional delay") {
    ExperimentConfig cfg;
    cfg.algorithm = Algorithm::Etde;
    cfg.rate = 0.04;
    cfg.scenario = Scenario::Constant;
    cfg.constant_delay = 5.85;
    cfg.snr_db = 20.0;
    cfg.record_length = 2000;
    cfg.n_realizations = 10;
    const CampaignSummary s = run_campaign(cfg);
    double tail = 0.0;
    std::size_t cnt = 0;
    for (std::size_t t = 3 * s.made.size() / 4; t < s.made.size(); ++t) {
        tail += s.made[t];
        ++cnt;
    }
    tail /= static_cast<double>(cnt);
    CHECK(tail < 0.12);  // reference scale is ~0.05
    CHECK(tail > 0.005);
}

TEST_CASE("etde: validates window size and factory arguments") {
    EtdeState s = make_etde_state(7, 0.04);
    const std::vector<double> window(14, 0.0);
    CHECK_THROWS_AS(etde_step(s, window, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_etde_state(0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_etde_state(7, 0.0), std::invalid_argument);
}

TEST_CASE("sun: zero input is a no-op") {
    SunState s = make_sun_state(8, 0.02);
    const std::vector<double> window(8, 0.0);
    const BaselineStepResult r = sun_step(s, window, 0.0);
    CHECK(r.error == 0.0);
    CHECK_FALSE(r.diverged);
    for (double w : s.weights) CHECK(w == 0.0);
    CHECK(s.delay_estimate == 0.0);

    // Also a no-op for a warmed-up state.
    s.weights[3] = 0.4;
    s.weights[6] = 0.7;
    sun_step(s, window, 0.0);
    CHECK(s.weights[3] == 0.4);
    CHECK(s.weights[6] == 0.7);
}

TEST_CASE("sun: single-step hand arithmetic from zero weights") {
    SunState s = make_sun_state(3, 0.05);
    const std::vector<double> window{1.0, 2.0, -1.0};
    const BaselineStepResult r = sun_step(s, window, 0.5);
    // y = 0, e = 0.5; DC pull = 2 mu kappa (1 - 0) / 3 with kappa = 3.
    CHECK(r.error == 0.5);
    const double pull = 2.0 * 0.05 * 3.0 / 3.0;
    CHECK(s.weights[0] == doctest::Approx(2.0 * 0.05 * 0.5 * 1.0 + pull).epsilon(1e-15));
    CHECK(s.weights[1] == doctest::Approx(2.0 * 0.05 * 0.5 * 2.0 + pull).epsilon(1e-15));
    CHECK(s.weights[2] == doctest::Approx(2.0 * 0.05 * 0.5 * -1.0 + pull).epsilon(1e-15));
}

TEST_CASE("sun: converges on an integer delay and reads it out") {
    const std::size_t len = 3000;
    const SensorPair pair = make_sensor_pair(len, kPi / 2,
                                             DelayProfile::constant(2.0, len), 30.0, 21);
    SunState s = make_sun_state(8, 0.02);
    for (std::size_t n = 7; n + 7 < len; ++n) {
        std::span<const double> window(&pair.sensor1.samples[n - 7], 8);
        const BaselineStepResult r = sun_step(s, window, pair.sensor2[n]);
        REQUIRE_FALSE(r.diverged);
    }
    CHECK(std::abs(s.delay_estimate - 2.0) < 0.1);
}

TEST_CASE("sun: reaches the delay neighborhood quickly at the fig-2 rate") {
    ExperimentConfig cfg;
    cfg.algorithm = Algorithm::Sun;
    cfg.rate = 0.02;
    cfg.scenario = Scenario::Constant;
    cfg.constant_delay = 5.85;
    cfg.snr_db = 20.0;
    cfg.record_length = 2000;
    cfg.n_realizations = 10;
    const CampaignSummary s = run_campaign(cfg);
    long first = -1;
    for (std::size_t t = 0; t < s.made.size(); ++t) {
        if (s.made[t] < 1.0) {
            first = static_cast<long>(s.start_n + t);
            break;
        }
    }
    CHECK(first >= 0);
    CHECK(first < 600);
}

TEST_CASE("sun: small-step tracking error sits at the reference scale") {
    ExperimentConfig cfg;
    cfg.algorithm = Algorithm::Sun;
    cfg.rate = 0.008;
    cfg.scenario = Scenario::SmallStep;
    cfg.snr_db = 20.0;
    cfg.n_realizations = 30;
    const CampaignSummary s = run_campaign(cfg);
    // Reference scale 0.235; the causal-tap variant lands below it, so the
    // assertion pins the order of magnitude rather than a tight band.
    CHECK(s.time_avg_made > 0.05);
    CHECK(s.time_avg_made < 0.31);
    CHECK(s.instability_fraction == 0.0);
}

TEST_CASE("sun: diverges at an excessive learning rate and is flagged") {
    const std::size_t len = 3000;
    const SensorPair pair = make_sensor_pair(len, kPi / 2,
                                             DelayProfile::constant(3.85, len), 20.0, 33);
    SunState s = make_sun_state(8, 0.3);
    bool diverged = false;
    for (std::size_t n = 7; n + 7 < len; ++n) {
        std::span<const double> window(&pair.sensor1.samples[n - 7], 8);
        if (sun_step(s, window, pair.sensor2[n]).diverged) {
            diverged = true;
            break;
        }
    }
    CHECK(diverged);
    for (double w : s.weights) CHECK(std::isfinite(w));  // rejected, not stored
}

TEST_CASE("etde fails the large downward step while sun tracks it") {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::LargeStep;
    cfg.snr_db = 20.0;
    cfg.record_length = 12000;
    cfg.n_realizations = 8;

    cfg.algorithm = Algorithm::Etde;
    cfg.rate = 0.02;
    const CampaignSummary etde = run_campaign(cfg);

    cfg.algorithm = Algorithm::Sun;
    cfg.rate = 0.008;
    const CampaignSummary sun = run_campaign(cfg);

    CHECK(etde.time_avg_made > 1.0);
    CHECK(sun.time_avg_made < 0.6);
}

TEST_CASE("dsinc matches a central difference of sinc") {
    for (double x : {-3.3, -0.9, 0.4, 2.7}) {
        const double h = 1e-6;
        const double fd = (sinc(x + h) - sinc(x - h)) / (2.0 * h);
        CHECK(dsinc(x) == doctest::Approx(fd).epsilon(1e-5));
    }
    CHECK(dsinc(0.0) == 0.0);
}
