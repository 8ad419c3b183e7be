#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rproj::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 output function. A cheap, well-diffusing 64->64 bit mixer;
/// every matrix entry and trial seed in this library is derived from it so
/// that generation is a pure function of (seed, indices) and therefore
/// independent of evaluation order.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Folds one word into a running key.
constexpr std::uint64_t combine(std::uint64_t key, std::uint64_t word) noexcept {
  return splitmix64(key ^ word);
}

/// Derives a child seed from a master seed and up to three stream indices.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b = 0, std::uint64_t c = 0) noexcept {
  return combine(combine(combine(combine(master, 0x7261'6e64'7072'6f6aULL), a), b), c);
}

/// Uniform double in [0, 1) from the top 53 bits of a mixed word.
constexpr double uniform01(std::uint64_t h) noexcept {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

struct NormalPair {
  double z0;
  double z1;
};

/// Two independent standard normals via Box-Muller from one 64-bit key.
inline NormalPair normal_pair(std::uint64_t key) noexcept {
  const double u1 = 1.0 - uniform01(key);            // (0, 1]: log stays finite
  const double u2 = uniform01(splitmix64(key ^ kGolden));
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

/// Sequential splitmix64 stream for bulk generation (datasets, shuffles).
class Stream {
 public:
  explicit Stream(std::uint64_t seed) noexcept : state_(combine(seed, 0x7374'7265'616dULL)) {}

  std::uint64_t next_u64() noexcept {
    state_ += kGolden;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double next_uniform() noexcept { return uniform01(next_u64()); }

  /// Uniform in [lo, hi).
  double next_uniform(double lo, double hi) noexcept { return lo + (hi - lo) * next_uniform(); }

  double next_normal() noexcept {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const NormalPair p = normal_pair(next_u64());
    spare_ = p.z1;
    have_spare_ = true;
    return p.z0;
  }

  /// Uniform integer in [0, bound) by rejection; bound must be positive.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % bound;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rproj::rng
