#ifndef TVD_RNG_HPP
#define TVD_RNG_HPP

#include <cstdint>
#include <cmath>
#include <random>

namespace tvd {

// Mixes a 64-bit value through the splitmix64 finalizer. Used to derive
// independent child seeds from a (base seed, stream tag) pair so that every
// noise source and realization gets its own reproducible stream.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d4a2c62d2c083fULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream_tag) {
    return splitmix64(splitmix64(base) ^ splitmix64(~stream_tag));
}

// Deterministic standard-normal stream: mt19937_64 uniforms fed through an
// explicit Box-Muller transform, so the byte-for-byte output depends only on
// the seed and not on the standard library's normal_distribution internals.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
        double u2 = uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;  // [0, 1)
    }

    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace tvd

#endif
