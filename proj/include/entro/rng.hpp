#pragma once

#include <cstdint>

namespace entro {

// splitmix64: tiny deterministic stream used wherever an algorithm needs
// "random" restarts that must not depend on thread scheduling.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound)
    std::uint64_t next_below(std::uint64_t bound) { return bound ? next() % bound : 0; }

    // uniform in [0, 1)
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline std::uint64_t hash_mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

}  // namespace entro
