#include "platoonsim/rng.hpp"

namespace platoonsim {

double uniform01(Lcg64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Lcg64 make_stream(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over (seed, stream)
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return Lcg64(z);
}

}  // namespace platoonsim
