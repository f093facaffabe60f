#pragma once

#include <cmath>
#include <cstdint>

namespace ballfields {

/// Counter-based random stream: output n is a fixed hash of (seed, stream, n).
/// Streams never share state, so replicates can be assigned to workers in any
/// order and still draw identical values (SplitMix64 output function).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) {
    state_ = mix(seed ^ 0x8f5e6d7c3b2a1908ULL) ^ mix(stream * 0x9e3779b97f4a7c15ULL + 1);
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    return mix(z);
  }

  /// Uniform on the open interval (0, 1).
  double uniform01() {
    // 53-bit mantissa, then shift away from 0.
    const double u = (next_u64() >> 11) * 0x1.0p-53;
    return u + 0x1.0p-54;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double exponential() { return -std::log(uniform01()); }

  /// Standard normal via Box-Muller (two uniforms per draw, no cached state).
  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  std::uint64_t poisson(double mean);

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace ballfields
