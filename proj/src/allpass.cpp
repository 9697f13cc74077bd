#include "tvd/allpass.hpp"

#include <cmath>
#include <stdexcept>

namespace tvd {

ApCoefficients ApCoefficients::zeros(int k_max) {
    if (k_max < 1) throw std::invalid_argument("ApCoefficients: k_max must be >= 1");
    ApCoefficients c;
    c.k_max = k_max;
    c.weights.assign(static_cast<std::size_t>(k_max), 0.0);
    return c;
}

void fill_regressors(RegressorSet& out, const Signal& sensor1, const Signal& sensor2,
                     std::size_t n, int k_max) {
    if (k_max < 1) throw std::invalid_argument("build_regressors: k_max must be >= 1");
    const std::size_t k = static_cast<std::size_t>(k_max);
    if (n < k || n + k >= sensor2.length() || n >= sensor1.length())
        throw std::out_of_range("build_regressors: index outside the K-sample latency window");
    if (sensor1.length() != sensor2.length())
        throw std::invalid_argument("build_regressors: sensor length mismatch");

    out.x_minus.resize(k);
    out.x_plus.resize(k);
    out.residual.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        out.x_minus[i] = sensor1[n - 1 - i];
        out.x_plus[i] = sensor2[n + 1 + i];
        out.residual[i] = out.x_minus[i] - out.x_plus[i];
    }
    out.desired = sensor2[n] - sensor1[n];
}

RegressorSet build_regressors(const Signal& sensor1, const Signal& sensor2,
                              std::size_t n, int k_max) {
    RegressorSet out;
    fill_regressors(out, sensor1, sensor2, n, k_max);
    return out;
}

std::optional<double> delay_from_coefficients(const ApCoefficients& coeffs,
                                              double eps_den) {
    double num = 0.0;
    double den = 1.0;  // a0 = 1 contributes 1 to the sum, 0 to the numerator
    for (int k = 1; k <= coeffs.k_max; ++k) {
        const double w = coeffs.weights[static_cast<std::size_t>(k - 1)];
        num += k * w;
        den += w;
    }
    if (std::abs(den) <= eps_den) return std::nullopt;
    return 2.0 * num / den;
}

double predict_output(const ApCoefficients& coeffs, const RegressorSet& reg) {
    if (reg.residual.size() != static_cast<std::size_t>(coeffs.k_max))
        throw std::invalid_argument("predict_output: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < reg.residual.size(); ++i)
        acc += reg.residual[i] * coeffs.weights[i];
    return acc;
}

double residual_energy(const RegressorSet& reg) {
    double acc = 0.0;
    for (double r : reg.residual) acc += r * r;
    return acc;
}

}  // namespace tvd
