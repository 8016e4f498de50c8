#pragma once

// Portable seeded randomness.
//
// Golden files depend on the exact sample stream, so nothing here goes through
// the implementation-defined std::*_distribution classes:
//   - engine:   std::mt19937_64 (sequence fixed by the standard)
//   - uniform:  top 53 bits of one engine output, scaled by 2^-53, in [0, 1)
//   - gaussian: Box-Muller, two uniforms per sample, cosine branch only
//   - sub-seeds: splitmix64 finaliser over (seed, stream, index)

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace collision_code {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent seed for (stream, index) derived from a master seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed ^ splitmix64(stream)) + index);
}

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// True with probability p.
  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
    std::uint64_t x = 0;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  double gaussian(double mean, double sigma) {
    // 1 - u keeps the logarithm argument in (0, 1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return mean + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace collision_code
