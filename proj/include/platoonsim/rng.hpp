#pragma once

#include <cstdint>
#include <random>

namespace platoonsim {

// Knuth MMIX LCG, modulus 2^64: x' = a*x + c.
inline constexpr std::uint64_t kLcgMul = 6364136223846793005ULL;
inline constexpr std::uint64_t kLcgInc = 1442695040888963407ULL;

using Lcg64 = std::linear_congruential_engine<std::uint64_t, kLcgMul, kLcgInc, 0>;

// Top 53 bits of the next state scaled to [0, 1).
double uniform01(Lcg64& rng);

// Independent streams derived from one scenario seed.
Lcg64 make_stream(std::uint64_t seed, std::uint64_t stream);

}  // namespace platoonsim
