#pragma once

#include <cstdint>
#include <random>

namespace edgeworth {

using Rng = std::mt19937_64;

// Seed for substream `index` of a master seed (splitmix64 finalizer). Parallel
// work derives one substream per work item so results do not depend on the
// thread count.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Rng make_substream(std::uint64_t master, std::uint64_t index) {
  return Rng(substream_seed(master, index));
}

}  // namespace edgeworth
