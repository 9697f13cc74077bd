#ifndef TVD_TEST_UTIL_HPP
#define TVD_TEST_UTIL_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

// Hann-windowed power spectrum estimate at one frequency (rad/sample),
// evaluated by direct accumulation with a rotating phasor. Independent of the
// generator under test; used as the spectral oracle.
inline double spectral_power(std::span<const double> x, double omega) {
    const std::size_t n = x.size();
    const double c = std::cos(omega), s = std::sin(omega);
    double re = 1.0, im = 0.0;          // e^{-j omega n} via rotation
    double acc_re = 0.0, acc_im = 0.0;
    double wsum = 0.0;
    const double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * pi * static_cast<double>(i) /
                                              static_cast<double>(n - 1));
        const double v = w * x[i];
        acc_re += v * re;
        acc_im -= v * im;
        wsum += w * w;
        const double nre = re * c - im * s;
        im = re * s + im * c;
        re = nre;
    }
    return (acc_re * acc_re + acc_im * acc_im) / wsum;
}

// Mean spectral power over an open frequency interval.
inline double band_mean_power(std::span<const double> x, double lo, double hi,
                              int points = 60) {
    double acc = 0.0;
    for (int i = 0; i < points; ++i) {
        const double omega = lo + (hi - lo) * (i + 0.5) / points;
        acc += spectral_power(x, omega);
    }
    return acc / points;
}

inline double db_ratio(double a, double b) { return 10.0 * std::log10(a / b); }

#endif
