#pragma once

// Seed plumbing. Every random quantity is drawn from a std::mt19937_64 whose
// seed is derived from (master seed, stream tag, index) by SplitMix64 mixing,
// so per-sample streams do not depend on execution order or thread count.

#include <cstdint>
#include <random>

namespace fdalg {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stream tags keep unrelated consumers of one master seed apart.
enum class Stream : std::uint64_t {
  haar = 1,
  density = 2,
  dpi = 3,
  staged = 4,
};

/// seed = splitmix64(splitmix64(splitmix64(master) ^ tag) ^ index)
constexpr std::uint64_t derive_seed(std::uint64_t master, Stream tag, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(splitmix64(master) ^ static_cast<std::uint64_t>(tag)) ^ index);
}

inline Rng make_rng(std::uint64_t master, Stream tag, std::uint64_t index) {
  return Rng(derive_seed(master, tag, index));
}

}  // namespace fdalg
