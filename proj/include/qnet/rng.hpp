#ifndef QNET_RNG_HPP
#define QNET_RNG_HPP

#include <cmath>
#include <cstdint>

namespace qnet {

// splitmix64: counter-based 64-bit generator. Streams derived from
// (seed, index) are independent and reproducible regardless of how samples
// are scheduled across workers.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static SplitMix64 for_sample(std::uint64_t seed, std::uint64_t index) {
        return SplitMix64(seed + 0x9E3779B97F4A7C15ULL * (index + 1));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform on (0, 1]
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // standard normal via Box-Muller (explicit formulas for cross-run
    // reproducibility; std::normal_distribution is implementation-defined)
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace qnet

#endif
