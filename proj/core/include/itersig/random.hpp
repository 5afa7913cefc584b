#pragma once

#include <cstdint>
#include <random>

namespace itersig {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Decorrelated child seed for replication/stream `index`. Index 0 returns
/// the base seed unchanged so a single-replication run retraces the base
/// trajectory exactly.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  if (index == 0) return base;
  return splitmix64(base ^ splitmix64(index));
}

/// Uniform double in [0, 1) from the top 53 bits; bit-exact across platforms
/// since mt19937_64's output sequence is fully specified.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace itersig
