#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace conatsim {
namespace rng {

/// Algorithm identifier recorded in sampling metadata. mt19937-64 output is
/// pinned by the standard and the Box-Muller transform below is spelled out
/// explicitly, so identical seeds reproduce identical streams on any
/// conforming implementation.
inline constexpr const char* kAlgorithmName = "mt19937-64+box-muller/block4096";

inline constexpr std::size_t kBlockSize = 4096;

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t block) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    return std::mt19937_64(seq);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Standard-normal stream via the Box-Muller transform (pair-caching).
class NormalStream {
  public:
    NormalStream(std::uint64_t seed, std::uint64_t block)
        : eng_(make_engine(seed, block)) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01(eng_);  // (0, 1]
        const double u2 = uniform01(eng_);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace rng
}  // namespace conatsim
