#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace geomlex {

// 64-bit FNV-1a; used for input digests and per-label seed derivation.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Counter-based splitmix64 stream. Output depends only on the seed and the
// number of draws so far, which makes every sampling path reproducible
// bit-for-bit across platforms.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n); n must be > 0.
  std::uint64_t next_below(std::uint64_t n) {
    // rejection sampling to avoid modulo bias
    std::uint64_t threshold = -n % n;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Standard normal via Box-Muller. Both uniforms are consumed on every
  // call (no cached spare), so the draw count stays predictable.
  double next_gaussian() {
    double u1 = 1.0 - next_double();  // (0, 1]
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  std::uint64_t state_;
};

// Derives an independent substream seed, e.g. per category label.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  return seed ^ fnv1a64(tag);
}

}  // namespace geomlex
