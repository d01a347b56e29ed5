#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cliffordt {

/// Engine used for every stochastic component.
using RandomEngine = std::mt19937_64;

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive a child seed from a base seed and a path of indices.
///
/// Realization i of parameter point (N, n_T) gets
/// `child_seed(base, {stream, N, n_T, i})`, so its stream does not depend on
/// which worker runs it or in which order.
inline std::uint64_t child_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(base);
    for (auto p : path) {
        h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL));
    }
    return h;
}

/// Uniform integer in [0, bound) without modulo bias. Portable across
/// standard libraries, unlike std::uniform_int_distribution.
inline std::uint64_t uniform_index(RandomEngine& rng, std::uint64_t bound) {
    const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

/// Uniform real in [0, 1) with 53 random bits.
inline double uniform_unit(RandomEngine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace cliffordt
