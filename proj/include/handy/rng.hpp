// Deterministic random number streams. All draws go through fixed-width
// integer arithmetic on mt19937_64 output so that identical seeds give
// identical sequences on every platform and standard library.
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace handy {

class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    // Derives an independent stream from a master seed and a tag, so that
    // e.g. workload generation and per-node protocol jitter never share a
    // sequence. index distinguishes per-node streams under the same tag.
    static Rng forStream(uint64_t seed, std::string_view tag, uint64_t index = 0) {
        uint64_t h = 1469598103934665603ull;  // FNV-1a offset basis
        for (char c : tag) {
            h ^= static_cast<uint8_t>(c);
            h *= 1099511628211ull;
        }
        h ^= seed + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h ^= index * 0xbf58476d1ce4e5b9ull + 0x94d049bb133111ebull;
        return Rng(splitmix(h));
    }

    uint64_t nextU64() { return gen_(); }

    // Uniform in [0, bound), bound > 0. Lemire's multiply-shift rejection.
    uint32_t uniformU32(uint32_t bound) {
        uint64_t x = nextU64() >> 32;
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto lo = static_cast<uint64_t>(m & 0xffffffffull);
        if (lo < bound) {
            uint64_t threshold = (0x100000000ull - bound) % bound;
            while (lo < threshold) {
                x = nextU64() >> 32;
                m = static_cast<__uint128_t>(x) * bound;
                lo = static_cast<uint64_t>(m & 0xffffffffull);
            }
        }
        return static_cast<uint32_t>(m >> 32);
    }

    // Uniform integer in [lo, hi], inclusive.
    uint32_t uniformInt(uint32_t lo, uint32_t hi) {
        return lo + uniformU32(hi - lo + 1);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() {
        return static_cast<double>(nextU64() >> 11) * 0x1.0p-53;
    }

    double uniformReal(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    static uint64_t splitmix(uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::mt19937_64 gen_;
};

}  // namespace handy
