#ifndef NAMESIFT_RNG_HPP
#define NAMESIFT_RNG_HPP

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>
#include <vector>

namespace namesift {

// All randomized paths in the library draw from std::mt19937_64 through the
// helpers below.  mt19937_64 output is fixed by the standard and the helpers
// avoid std::uniform_int_distribution / std::shuffle, whose results are
// implementation-defined, so seeded runs reproduce byte-for-byte on any
// platform.
using Rng = std::mt19937_64;

// Unbiased draw from [0, n) by rejection.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    // rem = 2^64 mod n
    std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % n) + 1;
    if (rem == n) rem = 0;
    for (;;) {
        std::uint64_t r = rng();
        if (rem == 0 || r <= std::numeric_limits<std::uint64_t>::max() - rem) {
            return r % n;
        }
    }
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_real01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle_in_place(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_index(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

// 64-bit FNV-1a; used for config hashes and model-file checksums.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace namesift

#endif
