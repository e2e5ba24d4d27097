#pragma once

#include <cstdint>
#include <random>

namespace rmlab {

using Engine = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Stream splitting: every (root, stream) pair gets its own engine seed, so
// trial k can be replayed on its own without running trials 0..k-1.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

// Uniform on [0, 1) from the top 53 bits.
inline double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

// Uniform on [lo, hi).
inline double uniform(Engine& engine, double lo, double hi) {
  return lo + (hi - lo) * uniform01(engine);
}

}  // namespace rmlab
