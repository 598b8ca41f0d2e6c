#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pump::rng {

// All sample streams must be reproducible bit-for-bit across platforms.
// std::mt19937_64 is fully specified by the standard, but the standard
// *distributions* are not, so the double-valued draws below are spelled
// out explicitly instead of going through <random> distribution objects.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Decorrelated seed for ensemble member `sample_index` of a run keyed by
/// `base_seed`. Nearby (base_seed, index) pairs map to unrelated seeds.
inline std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t sample_index) {
  std::uint64_t s = base_seed;
  (void)splitmix64(s);
  s ^= 0x632be59bd9b4e019ULL * (sample_index + 1);
  std::uint64_t out = splitmix64(s);
  out ^= splitmix64(s);
  return out;
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random mantissa bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [-1, 1).
  double uniform_sym() { return 2.0 * uniform() - 1.0; }

  /// Standard normal via Box-Muller (cosine branch only).
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pump::rng
