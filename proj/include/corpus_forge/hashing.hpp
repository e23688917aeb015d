#pragma once

#include <cstdint>
#include <cstring>
#include <string_view>

namespace corpus_forge::hashing {

// Fixed seed for content keys. Changing it invalidates every stored key.
inline constexpr std::uint64_t kDefaultSeed = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// MurmurHash64A (Austin Appleby, public domain), little-endian reads.
inline std::uint64_t murmur64(std::string_view data, std::uint64_t seed = kDefaultSeed) noexcept {
    constexpr std::uint64_t m = 0xc6a4a7935bd1e995ULL;
    constexpr int r = 47;
    const std::size_t len = data.size();
    std::uint64_t h = seed ^ (len * m);

    const auto* p = reinterpret_cast<const unsigned char*>(data.data());
    const std::size_t blocks = len / 8;
    for (std::size_t i = 0; i < blocks; ++i) {
        std::uint64_t k = 0;
        for (int b = 7; b >= 0; --b) k = (k << 8) | p[i * 8 + static_cast<std::size_t>(b)];
        k *= m;
        k ^= k >> r;
        k *= m;
        h ^= k;
        h *= m;
    }
    const unsigned char* tail = p + blocks * 8;
    switch (len & 7) {
        case 7: h ^= std::uint64_t(tail[6]) << 48; [[fallthrough]];
        case 6: h ^= std::uint64_t(tail[5]) << 40; [[fallthrough]];
        case 5: h ^= std::uint64_t(tail[4]) << 32; [[fallthrough]];
        case 4: h ^= std::uint64_t(tail[3]) << 24; [[fallthrough]];
        case 3: h ^= std::uint64_t(tail[2]) << 16; [[fallthrough]];
        case 2: h ^= std::uint64_t(tail[1]) << 8; [[fallthrough]];
        case 1:
            h ^= std::uint64_t(tail[0]);
            h *= m;
    }
    h ^= h >> r;
    h *= m;
    h ^= h >> r;
    return h;
}

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

// (a * x + b) mod 2^61-1.
constexpr std::uint64_t affine_mod_mersenne61(std::uint64_t a, std::uint64_t x, std::uint64_t b) noexcept {
    const unsigned __int128 prod = static_cast<unsigned __int128>(a) * (x % kMersenne61) + b;
    std::uint64_t lo = static_cast<std::uint64_t>(prod & kMersenne61);
    std::uint64_t hi = static_cast<std::uint64_t>(prod >> 61);
    std::uint64_t v = lo + hi;
    while (v >= kMersenne61) v -= kMersenne61;
    return v;
}

}  // namespace corpus_forge::hashing
