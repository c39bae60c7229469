#pragma once

#include <cstdint>
#include <random>

namespace baird {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seed of run k: the k-th output of a SplitMix64 counter stream started at
// the master seed, i.e. mix64(master + (k + 1) * golden_gamma).
constexpr std::uint64_t child_seed(std::uint64_t master, std::uint64_t k) {
    return mix64(master + (k + 1) * 0x9E3779B97F4A7C15ULL);
}

// Uniform double in [0, 1) from the top 53 bits of one 64-bit draw. Written
// out rather than using std::uniform_real_distribution so that streams are
// identical across standard libraries.
template <class URBG>
double uniform01(URBG& rng) {
    return static_cast<double>(static_cast<std::uint64_t>(rng()) >> 11) * 0x1.0p-53;
}

// Uniform index in [0, n), n >= 1.
template <class URBG>
std::uint64_t uniform_index(URBG& rng, std::uint64_t n) {
    auto i = static_cast<std::uint64_t>(uniform01(rng) * static_cast<double>(n));
    return i < n ? i : n - 1;
}

}  // namespace baird
