// Counter-based random number generator, "ttv-rng v1".
//
// Deterministic across platforms and library versions: draw i of stream s
// under seed q is SplitMix64 applied to the 64-bit mix of (q, s, i).
// Uniforms take the top 53 bits into [0, 1); normals use the Box-Muller
// transform on consecutive uniforms (cached spare).  Changing any of this
// is a format break and must bump the version tag.

#pragma once

#include <cmath>
#include <cstdint>

namespace ttv {

inline constexpr const char* kRngVersion = "ttv-rng-v1";

namespace detail {

inline uint64_t splitmix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t stream = 0)
      : key_(detail::splitmix64(seed ^ detail::splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1))) {}

  uint64_t next_u64() { return detail::splitmix64(key_ ^ detail::splitmix64(counter_++)); }

  /// Uniform on [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, n) by rejection (unbiased).
  uint64_t uniform_below(uint64_t n) {
    const uint64_t limit = n * (UINT64_MAX / n);
    uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  uint64_t key_ = 0;
  uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ttv
