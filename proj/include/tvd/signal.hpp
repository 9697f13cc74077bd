#ifndef TVD_SIGNAL_HPP
#define TVD_SIGNAL_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace tvd {

// Uniformly sampled real-valued sequence. Delays are measured in samples;
// there is no attached sample rate.
struct Signal {
    std::vector<double> samples;

    Signal() = default;
    explicit Signal(std::vector<double> s) : samples(std::move(s)) {}
    explicit Signal(std::size_t n) : samples(n, 0.0) {}

    std::size_t length() const { return samples.size(); }
    double operator[](std::size_t i) const { return samples[i]; }
    double& operator[](std::size_t i) { return samples[i]; }

    bool all_finite() const;
    double mean() const;
    double power() const;     // mean of squares
    double variance() const;  // about the sample mean
};

struct DelayStep {
    std::size_t index;  // first sample at which the new delay applies
    double delay;       // new delay in samples

    bool operator==(const DelayStep&) const = default;
};

// Ground-truth delay tau(n) in samples: constant or piecewise-constant.
// Step indices are strictly increasing and lie within [0, length).
class DelayProfile {
public:
    DelayProfile() = default;

    static DelayProfile constant(double delay, std::size_t length);
    static DelayProfile piecewise(double initial_delay, std::vector<DelayStep> steps,
                                  std::size_t length);

    double at(std::size_t n) const;
    std::size_t length() const { return length_; }
    double initial_delay() const { return initial_; }
    const std::vector<DelayStep>& steps() const { return steps_; }
    bool is_constant() const { return steps_.empty(); }

    double max_delay() const;
    double min_delay() const;

    bool operator==(const DelayProfile&) const = default;

private:
    double initial_ = 0.0;
    std::vector<DelayStep> steps_;
    std::size_t length_ = 0;
};

// Two noisy measurement streams of a common source:
//   sensor1(n) = x(n) + eta1(n),  sensor2(n) = x(n - tau(n)) + eta2(n).
struct SensorPair {
    Signal sensor1;
    Signal sensor2;
    DelayProfile profile;
    double noise_variance = 0.0;  // sigma_eta^2 per stream
    std::uint64_t seed = 0;
};

// --- serialization ---------------------------------------------------------
// CSV: one column `value` with a header row.
// Binary: 8-byte little-endian length prefix followed by f64 LE samples.

void write_signal_csv(const std::string& path, const Signal& s);
Signal read_signal_csv(const std::string& path);
void write_signal_binary(const std::string& path, const Signal& s);
Signal read_signal_binary(const std::string& path);

// CSV with columns `index,delay`, one row per sample.
void write_profile_csv(const std::string& path, const DelayProfile& p);

}  // namespace tvd

#endif
