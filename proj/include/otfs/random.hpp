#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "otfs/types.hpp"

namespace otfs {

// splitmix64 finaliser; used to derive independent sub-stream seeds so that
// e.g. the symbols and the noise of one trial never share a generator.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline Complex complex_normal(std::mt19937_64& rng, double var) {
  std::normal_distribution<double> g(0.0, std::sqrt(var / 2.0));
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

}  // namespace otfs
