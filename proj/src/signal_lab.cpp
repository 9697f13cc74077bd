#include "tvd/signal_lab.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tvd/rng.hpp"

namespace tvd {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Modified Bessel function I0 by power series; converges quickly for the
// beta values used here.
double bessel_i0(double x) {
    double sum = 1.0;
    double term = 1.0;
    double half_x = x / 2.0;
    for (int k = 1; k < 64; ++k) {
        term *= (half_x / k) * (half_x / k);
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return sum;
}

const double kKaiserNorm = bessel_i0(kKaiserBeta);

}  // namespace

double sinc(double x) {
    if (std::abs(x) < 1e-8) {
        double px = kPi * x;
        return 1.0 - px * px / 6.0;
    }
    if (x == std::nearbyint(x)) return 0.0;  // exact zeros at integers
    return std::sin(kPi * x) / (kPi * x);
}

double kaiser_window(double x) {
    double t = 1.0 - x * x;
    if (t < 0.0) return 0.0;
    return bessel_i0(kKaiserBeta * std::sqrt(t)) / kKaiserNorm;
}

double interp_kernel(double u) {
    if (std::abs(u) > kKernelHalfWidth) return 0.0;
    return sinc(u) * kaiser_window(u / kKernelHalfWidth);
}

Signal generate_bandlimited_gaussian(std::size_t length, double bandwidth,
                                     std::uint64_t seed) {
    if (length == 0) throw std::invalid_argument("generate_bandlimited_gaussian: length must be > 0");
    if (!(bandwidth > 0.0) || bandwidth > kPi)
        throw std::invalid_argument("generate_bandlimited_gaussian: bandwidth must be in (0, pi]");

    const int half = kKernelHalfWidth;

    // Windowed-sinc lowpass taps, cutoff at `bandwidth` rad/sample.
    std::vector<double> taps(2 * half + 1);
    const double wc = bandwidth / kPi;  // cutoff as a fraction of Nyquist
    for (int j = -half; j <= half; ++j) {
        taps[j + half] = wc * sinc(wc * j) * kaiser_window(static_cast<double>(j) / half);
    }

    // White input long enough that every output sample sees a full kernel;
    // the filter warm-up falls outside the kept range.
    GaussianStream g(seed);
    std::vector<double> white(length + 2 * half);
    for (double& v : white) v = g.next();

    Signal out(length);
    for (std::size_t n = 0; n < length; ++n) {
        double acc = 0.0;
        const double* w = &white[n];
        for (int j = 0; j < 2 * half + 1; ++j) acc += taps[j] * w[j];
        out[n] = acc;
    }

    // Renormalize to exactly zero mean and unit variance.
    double m = out.mean();
    for (double& v : out.samples) v -= m;
    double sd = std::sqrt(out.power());
    if (sd > 0.0) {
        for (double& v : out.samples) v /= sd;
    }
    return out;
}

namespace {

// Kernel taps for one delay value, laid out so that tap[i] multiplies the
// sample at position floor(t) - half + 1 + i. A piecewise-constant profile
// touches one row per distinct delay; rows are keyed on the exact delay.
struct KernelRow {
    double delay = 0.0;
    double frac = 0.0;
    std::vector<double> taps;
};

const KernelRow& kernel_row(std::vector<KernelRow>& cache, double delay, double t) {
    for (const auto& row : cache) {
        if (row.delay == delay) return row;
    }
    KernelRow row;
    row.delay = delay;
    row.frac = t - std::floor(t);
    row.taps.resize(2 * kKernelHalfWidth);
    for (int i = 0; i < 2 * kKernelHalfWidth; ++i) {
        row.taps[static_cast<std::size_t>(i)] =
            interp_kernel(row.frac + kKernelHalfWidth - 1 - i);
    }
    cache.push_back(std::move(row));
    return cache.back();
}

}  // namespace

Signal apply_fractional_delay(const Signal& input, const DelayProfile& profile) {
    if (input.length() != profile.length())
        throw std::invalid_argument("apply_fractional_delay: input/profile length mismatch");

    const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(input.length());
    const int half = kKernelHalfWidth;
    Signal out(input.length());
    std::vector<KernelRow> cache;

    for (std::ptrdiff_t n = 0; n < len; ++n) {
        const double tau = profile.at(static_cast<std::size_t>(n));
        const double t = static_cast<double>(n) - tau;
        const KernelRow& row = kernel_row(cache, tau, t);
        // Sample positions j = floor(t) - half + 1 .. floor(t) + half; values
        // outside the record are zeros. (The tap at offset -half is an exact
        // kernel zero, so the 2*half-wide row loses nothing.)
        const std::ptrdiff_t j_base =
            static_cast<std::ptrdiff_t>(std::floor(t)) - half + 1;
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(j_base, 0);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(j_base + 2 * half - 1, len - 1);
        double acc = 0.0;
        if (std::abs((t - std::floor(t)) - row.frac) < 0.5) {
            for (std::ptrdiff_t j = lo; j <= hi; ++j) {
                acc += input[static_cast<std::size_t>(j)] *
                       row.taps[static_cast<std::size_t>(j - j_base)];
            }
        } else {
            // floor(t) flipped against the cached row (delay a hair off an
            // integer); evaluate this sample directly.
            for (std::ptrdiff_t j = lo; j <= hi; ++j) {
                acc += input[static_cast<std::size_t>(j)] *
                       interp_kernel(t - static_cast<double>(j));
            }
        }
        out[static_cast<std::size_t>(n)] = acc;
    }
    return out;
}

NoisyResult add_noise_at_snr(const Signal& clean, double snr_db, std::uint64_t seed) {
    if (clean.length() == 0) throw std::invalid_argument("add_noise_at_snr: empty signal");
    if (snr_db == std::numeric_limits<double>::infinity()) {
        return {clean, 0.0};
    }
    const double variance = clean.power() / std::pow(10.0, snr_db / 10.0);
    const double sd = std::sqrt(variance);
    GaussianStream g(seed);
    NoisyResult r{clean, variance};
    for (double& v : r.signal.samples) v += sd * g.next();
    return r;
}

SensorPair make_sensor_pair(std::size_t length, double bandwidth,
                            const DelayProfile& profile, double snr_db,
                            std::uint64_t seed) {
    if (profile.length() != length)
        throw std::invalid_argument("make_sensor_pair: profile length mismatch");

    const Signal source = generate_bandlimited_gaussian(length, bandwidth,
                                                        derive_seed(seed, 1));
    const Signal delayed = apply_fractional_delay(source, profile);

    NoisyResult s1 = add_noise_at_snr(source, snr_db, derive_seed(seed, 2));
    NoisyResult s2 = add_noise_at_snr(delayed, snr_db, derive_seed(seed, 3));

    SensorPair pair;
    pair.sensor1 = std::move(s1.signal);
    pair.sensor2 = std::move(s2.signal);
    pair.profile = profile;
    pair.noise_variance = 0.5 * (s1.noise_variance + s2.noise_variance);
    pair.seed = seed;
    return pair;
}

}  // namespace tvd
