#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace xreg {

// splitmix64 step; used to fold seed components into one 64-bit state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic per-task generator: identical (seed, path) gives an identical
// stream on every platform, so parallel and serial runs agree bit-for-bit.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t state = seed;
    std::uint64_t mixed = splitmix64(state);
    for (std::uint64_t p : path) {
        state ^= p + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2);
        mixed ^= splitmix64(state);
    }
    return std::mt19937_64(mixed);
}

// Uniform integer in [0, n). std::uniform_int_distribution is not portable
// across standard libraries; this rejection sampler is.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

// Portable Fisher-Yates shuffle (std::shuffle ordering is unspecified).
template <typename T>
void shuffle_portable(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_index(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace xreg
