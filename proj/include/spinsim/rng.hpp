#pragma once

#include <cstdint>

#include "spinsim/angle.hpp"

namespace spinsim {

/// Deterministic splittable stream: a (seed, stream_index) pair addresses an
/// independent splitmix64 sequence, no fast-forwarding needed. Identical
/// (seed, index, draw count) always reproduces the same values.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_index = 0)
      : seed_(seed), index_(stream_index) {
    std::uint64_t k = mix(seed + 0x9E3779B97F4A7C15ull);
    state_ = mix(k ^ (stream_index * 0xBF58476D1CE4E5B9ull));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  /// Uniform on [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  Angle next_angle() { return Angle(next_double() * two_pi); }

  /// Fair coin, +1 or -1.
  int next_sign() { return (next_u64() & 1u) ? +1 : -1; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return index_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_ = 0;
  std::uint64_t seed_ = 0;
  std::uint64_t index_ = 0;
};

}  // namespace spinsim
