#pragma once

#include <cmath>
#include <cstdint>

// Counter-based deterministic random streams (splitmix64 output function).
// value(seed, i) depends only on (seed, i), so per-atom draws are identical
// whether the ensemble is filled serially or in parallel.
namespace maglat::rng {

inline std::uint64_t value(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// 53-bit mantissa uniform in [0, 1).
inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(value(seed, counter) >> 11) * 0x1.0p-53;
}

// Uniform in (0, 1]; safe under log().
inline double uniform01_pos(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>((value(seed, counter) >> 11) + 1) * 0x1.0p-53;
}

// Standard normal via Box-Muller; draw `index` consumes counters
// (2*index, 2*index + 1) of the stream.
inline double normal(std::uint64_t seed, std::uint64_t index) {
  const double u1 = uniform01_pos(seed, 2 * index);
  const double u2 = uniform01_pos(seed, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace maglat::rng
