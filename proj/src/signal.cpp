#include "tvd/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

#include "tvd/csv.hpp"

namespace tvd {

bool Signal::all_finite() const {
    for (double v : samples) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

double Signal::mean() const {
    if (samples.empty()) return 0.0;
    double acc = 0.0;
    for (double v : samples) acc += v;
    return acc / static_cast<double>(samples.size());
}

double Signal::power() const {
    if (samples.empty()) return 0.0;
    double acc = 0.0;
    for (double v : samples) acc += v * v;
    return acc / static_cast<double>(samples.size());
}

double Signal::variance() const {
    if (samples.empty()) return 0.0;
    double m = mean();
    double acc = 0.0;
    for (double v : samples) acc += (v - m) * (v - m);
    return acc / static_cast<double>(samples.size());
}

DelayProfile DelayProfile::constant(double delay, std::size_t length) {
    if (!std::isfinite(delay)) throw std::invalid_argument("DelayProfile: delay must be finite");
    DelayProfile p;
    p.initial_ = delay;
    p.length_ = length;
    return p;
}

DelayProfile DelayProfile::piecewise(double initial_delay, std::vector<DelayStep> steps,
                                     std::size_t length) {
    if (!std::isfinite(initial_delay))
        throw std::invalid_argument("DelayProfile: delay must be finite");
    std::size_t prev = 0;
    bool first = true;
    for (const auto& s : steps) {
        if (!std::isfinite(s.delay))
            throw std::invalid_argument("DelayProfile: delay must be finite");
        if (s.index >= length)
            throw std::invalid_argument("DelayProfile: step index out of range");
        if (!first && s.index <= prev)
            throw std::invalid_argument("DelayProfile: step indices must be strictly increasing");
        prev = s.index;
        first = false;
    }
    DelayProfile p;
    p.initial_ = initial_delay;
    p.steps_ = std::move(steps);
    p.length_ = length;
    return p;
}

double DelayProfile::at(std::size_t n) const {
    double d = initial_;
    for (const auto& s : steps_) {
        if (n < s.index) break;
        d = s.delay;
    }
    return d;
}

double DelayProfile::max_delay() const {
    double d = initial_;
    for (const auto& s : steps_) d = std::max(d, s.delay);
    return d;
}

double DelayProfile::min_delay() const {
    double d = initial_;
    for (const auto& s : steps_) d = std::min(d, s.delay);
    return d;
}

void write_signal_csv(const std::string& path, const Signal& s) {
    CsvWriter w(path);
    w.field(std::string("value"));
    w.end_row();
    for (double v : s.samples) {
        w.field(v);
        w.end_row();
    }
}

Signal read_signal_csv(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "r");
    if (!f) throw std::runtime_error("cannot open " + path);
    Signal out;
    char line[128];
    bool header = true;
    while (std::fgets(line, sizeof(line), f)) {
        if (header) {  // skip the `value` header row
            header = false;
            continue;
        }
        char* end = nullptr;
        double v = std::strtod(line, &end);
        if (end != line) out.samples.push_back(v);
    }
    std::fclose(f);
    return out;
}

void write_signal_binary(const std::string& path, const Signal& s) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::uint64_t n = s.samples.size();
    unsigned char hdr[8];
    for (int i = 0; i < 8; ++i) hdr[i] = static_cast<unsigned char>((n >> (8 * i)) & 0xff);
    std::fwrite(hdr, 1, 8, f);
    // Samples as little-endian f64. This code assumes a little-endian host,
    // which covers every platform the project targets.
    if (n > 0) std::fwrite(s.samples.data(), sizeof(double), s.samples.size(), f);
    std::fclose(f);
}

Signal read_signal_binary(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open " + path);
    unsigned char hdr[8];
    if (std::fread(hdr, 1, 8, f) != 8) {
        std::fclose(f);
        throw std::runtime_error("truncated signal file " + path);
    }
    std::uint64_t n = 0;
    for (int i = 0; i < 8; ++i) n |= static_cast<std::uint64_t>(hdr[i]) << (8 * i);
    Signal out;
    out.samples.resize(n);
    if (n > 0 && std::fread(out.samples.data(), sizeof(double), n, f) != n) {
        std::fclose(f);
        throw std::runtime_error("truncated signal file " + path);
    }
    std::fclose(f);
    return out;
}

void write_profile_csv(const std::string& path, const DelayProfile& p) {
    CsvWriter w(path);
    w.field(std::string("index"));
    w.field(std::string("delay"));
    w.end_row();
    for (std::size_t n = 0; n < p.length(); ++n) {
        w.field(n);
        w.field(p.at(n));
        w.end_row();
    }
}

}  // namespace tvd
