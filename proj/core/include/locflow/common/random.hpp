#pragma once

#include <cstdint>
#include <random>

namespace locflow {

/// SplitMix64 finalizer; derives independent stream seeds from a root seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  return mix_seed(root ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound). Rejection sampling keeps results identical
/// across standard library implementations.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Standard normal draw via Box-Muller; portable unlike std::normal_distribution.
double standard_normal(Rng& rng);

}  // namespace locflow
