#pragma once

#include <cstdint>

namespace sforest {

// Deterministic generators with a pinned algorithm so scenarios reproduce
// bit-for-bit from a seed on any platform.
//
//   - streams are derived with splitmix64: state = seed ^ purpose tag,
//     then four splitmix64 outputs seed a xoshiro256** generator;
//   - uniform doubles take the top 53 bits: (next() >> 11) * 2^-53.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Xoshiro256StarStar {
public:
    Xoshiro256StarStar(std::uint64_t seed, std::uint64_t stream_tag) {
        std::uint64_t sm = seed ^ stream_tag;
        for (auto& word : s_) word = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

// Stream tags: one fixed constant per generation purpose.
inline constexpr std::uint64_t kStreamObstacles = 0x4F42535441434C45ULL;
inline constexpr std::uint64_t kStreamTerminals = 0x5445524D494E414CULL;

}  // namespace sforest
