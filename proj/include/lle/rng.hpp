#pragma once

#include <cstdint>
#include <random>

namespace lle {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of stream `index` under master seed `seed`. Streams depend only on
/// (seed, index), never on which worker draws them or in what order.
constexpr std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

using Engine = std::mt19937_64;

inline Engine make_stream(std::uint64_t seed, std::uint64_t index) {
    return Engine(derive_stream_seed(seed, index));
}

inline constexpr std::uint64_t kDefaultSeed = 20240607;

}  // namespace lle
