#pragma once
// Deterministic seeding helpers.  Instance streams derive from (seed, index)
// so parallel or resumed harness runs see identical randomness.

#include <cstdint>
#include <random>
#include <vector>

namespace zerosum {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(index)));
}

/* Unbiased uniform draw from [0, n); avoids distribution objects, whose
   output differs between standard library implementations. */
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  std::uint64_t limit = ~0ull - ~0ull % n;
  std::uint64_t v;
  do { v = rng(); } while (v >= limit);
  return v % n;
}

/* k distinct values from [0, n) by partial Fisher-Yates, stable order. */
inline std::vector<std::uint32_t> sample_distinct(std::mt19937_64& rng,
                                                  std::uint32_t n, std::uint32_t k) {
  std::vector<std::uint32_t> pool(n);
  for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
  for (std::uint32_t i = 0; i < k; ++i)
    std::swap(pool[i], pool[i + (std::uint32_t)uniform_below(rng, n - i)]);
  pool.resize(k);
  return pool;
}

} // namespace zerosum
