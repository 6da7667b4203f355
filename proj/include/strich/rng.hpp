#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace strich {

/// splitmix64 step; the usual stateless mixer.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives a child seed from a master seed and a tag path, e.g.
/// mix_seed({master, kSeedItrich, window_index}). Independent units of work
/// (windows, k-means runs) each get their own stream so results do not depend
/// on scheduling.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t s = 0x5726b3a2c9f0d1e4ULL;
    for (std::uint64_t p : parts) s = splitmix64(s ^ p);
    return s;
}

// Domain tags for mix_seed paths.
inline constexpr std::uint64_t kSeedItrich = 1;
inline constexpr std::uint64_t kSeedKmeans = 2;
inline constexpr std::uint64_t kSeedSynth = 3;

using Rng = std::mt19937_64;

} // namespace strich
