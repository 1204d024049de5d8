#pragma once

#include <cstdint>
#include <random>

namespace qtraj {

using Rng = std::mt19937_64;

/// Counter-derived seed for stream `index` under `master` (splitmix64 finalizer).
/// Every ensemble member gets its own stream, so results do not depend on how
/// members are scheduled across workers.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

} // namespace qtraj
