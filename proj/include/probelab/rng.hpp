#pragma once
#include <cstdint>

namespace probelab {

// splitmix64 (Steele/Lea/Flood). Pinned here so runs are byte-identical across
// platforms; std::uniform_int_distribution is not.
struct Rng {
    uint64_t state;

    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Independent stream; used to hand sub-tasks their own generator.
    Rng split() { return Rng(next() ^ 0x6A09E667F3BCC909ull); }

    // Uniform in [0, n) by rejection.
    uint64_t below(uint64_t n) {
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    int bit() { return static_cast<int>(next() >> 63); }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Stateless hash of (seed, index): shared public randomness (e.g. "is address
// a sampled?") that two protocol parties evaluate independently.
inline uint64_t mix64(uint64_t seed, uint64_t index) {
    uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace probelab
