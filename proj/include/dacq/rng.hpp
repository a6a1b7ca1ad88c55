#pragma once

#include <cstdint>
#include <random>

namespace dacq {

using Rng = std::mt19937_64;

// splitmix64; used to derive independent seeds from a base seed.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-repetition stream: hash of (base seed, repetition index, budget index).
// Streams depend on nothing else, so repetitions can run in any order or
// concurrently and still produce identical results.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t rep,
                                 std::uint64_t budget_index) {
  return mix64(mix64(mix64(base) ^ rep) ^ (budget_index << 32));
}

}  // namespace dacq
