#pragma once

// Seed derivation. Child seeds come from SplitMix64 (Steele, Lea & Flood,
// constants 0x9E3779B97F4A7C15, 0xBF58476D1CE4E5B9, 0x94D049BB133111EB)
// applied to (master, stream index), so every replicate or fold owns an
// independent std::mt19937_64 stream regardless of execution order.

#include <cstdint>
#include <random>

namespace screening {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of stream `index` under `master`. Distinct indices give unrelated seeds.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t master, std::uint64_t index) {
  return Engine(derive_seed(master, index));
}

}  // namespace screening
