#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string_view>

namespace blocktrace {

// All randomness in the library flows through this fixed, documented
// pipeline so that any instance can be re-derived from (seed, tags) on any
// platform:
//   * splitmix64 is the raw 64-bit generator,
//   * mix_stream folds tag words into a seed to derive independent streams,
//   * uniforms are (u64 >> 11) * 2^-53,
//   * Gaussians come from the Box-Muller transform (no rejection).

constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t mix_stream(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ULL + (tag << 6) + (tag >> 2));
  return splitmix64(s);
}

constexpr std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the paired value is cached.
  double next_gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = 1.0 - next_unit();  // (0, 1], keeps log finite
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(angle);
    has_cached_ = true;
    return r * std::cos(angle);
  }

  // Standard complex Gaussian, E|z|^2 = 1.
  std::complex<double> next_complex_gaussian() {
    const double re = next_gaussian();
    const double im = next_gaussian();
    return {re * 0.7071067811865475244, im * 0.7071067811865475244};
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace blocktrace
