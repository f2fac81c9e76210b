#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace annrel {

// All stochastic code in the toolkit draws through these helpers.
// std::mt19937_64 produces identical streams everywhere, and we deliberately
// avoid std::*_distribution (whose output is implementation-defined) so that
// the same seed produces the same draws on every platform.

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the `index`-th substream of a master seed.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t substream) {
  return std::mt19937_64(substream_seed(seed, substream));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(eng);
}

inline bool bernoulli(std::mt19937_64& eng, double p) { return uniform01(eng) < p; }

/// Unbiased uniform integer in [0, n); n must be positive.
inline std::uint64_t uniform_index(std::mt19937_64& eng, std::uint64_t n) {
  const std::uint64_t rem = std::numeric_limits<std::uint64_t>::max() % n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - rem;
  std::uint64_t x = eng();
  while (x >= limit) x = eng();
  return x % n;
}

}  // namespace annrel
