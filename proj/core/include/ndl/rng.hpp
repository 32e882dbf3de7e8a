#pragma once

#include <cstdint>

#include "ndl/errors.hpp"

namespace ndl {

namespace detail {

/// 64-bit avalanche finalizer (splitmix64 step).
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

inline constexpr std::uint64_t rng_gamma = 0x9e3779b97f4a7c15ULL;

}  // namespace detail

/// Counter-based pseudorandom generator with splittable streams.
///
/// Output i of a stream is a pure function of (base key, i), so sequences are
/// reproducible across platforms and independent streams can be derived for
/// concurrent chains without sharing state. Bounded draws use bitmask
/// rejection and are exactly uniform.
class Rng {
public:
  Rng() : Rng(0, 0) {}

  Rng(std::uint64_t seed, std::uint64_t stream)
      : base_(detail::mix64(detail::mix64(seed + detail::rng_gamma) ^
                            detail::mix64(stream + 0x5851f42d4c957f2dULL))) {}

  /// Next raw 64-bit value.
  std::uint64_t next() {
    ++ctr_;
    return detail::mix64(base_ + ctr_ * detail::rng_gamma);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw parameter_error("Rng::below requires n >= 1");
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      std::uint64_t v = next() & mask;
      if (v < n) return v;
    }
  }

  /// Uniform int in [0, n); n must be positive.
  int below_int(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

  /// Derive an independent child stream; deterministic in (this stream, child).
  Rng split(std::uint64_t child) const {
    Rng r;
    r.base_ = detail::mix64(base_ ^ detail::mix64(child + 0xd6e8feb86659fd93ULL));
    r.ctr_ = 0;
    return r;
  }

private:
  std::uint64_t base_;
  std::uint64_t ctr_ = 0;
};

}  // namespace ndl
