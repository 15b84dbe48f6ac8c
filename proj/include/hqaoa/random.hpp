// random.hpp
// Seeded sampling helpers on top of std::mt19937_64.
//
// The engine's output sequence is fixed by the standard; the mappings below
// avoid the implementation-defined std:: distributions so that instances are
// identical across standard libraries.

#pragma once

#include <cstdint>
#include <random>

namespace hqaoa {

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection; bound > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

inline bool fair_bit(Rng& rng) { return (rng() >> 63) != 0; }

}  // namespace hqaoa
