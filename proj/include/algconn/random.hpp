#pragma once

// Portable random helpers. The standard distributions are implementation
// defined, so everything seeded here is built directly on mt19937_64 output,
// which the standard pins down bit for bit.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace algconn {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection, bound > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

/// Standard normal variate (Box-Muller, one value per call).
inline double standard_normal(Rng& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline bool coin_flip(Rng& rng) { return (rng() >> 63) != 0; }

}  // namespace algconn
