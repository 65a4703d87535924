#pragma once

#include <cstdint>

#include "padic/number.hpp"

namespace padic {

// Deterministic 64-bit generator (splitmix64).  Used instead of <random>
// engines/distributions so that seeded experiment output is identical across
// standard library implementations.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound); bound >= 1.  Modulo bias is irrelevant for the
    // tiny bounds used here (digits and small ranges).
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    long long range(long long lo, long long hi) {  // inclusive ends
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

private:
    std::uint64_t state_;
};

// A unit of Z_p with `digits` uniformly random digits (first digit nonzero).
inline PadicNumber random_unit(SplitMix64& rng, long long prime, long long digits) {
    bigint u = 1 + static_cast<long long>(rng.below(static_cast<std::uint64_t>(prime - 1)));
    bigint scale = prime;
    for (long long i = 1; i < digits; ++i) {
        u += scale * static_cast<long long>(rng.below(static_cast<std::uint64_t>(prime)));
        scale *= prime;
    }
    return PadicNumber::from_unit(prime, 0, u, digits);
}

// p^valuation * unit with random digits.
inline PadicNumber random_padic(SplitMix64& rng, long long prime, long long valuation,
                                long long digits) {
    PadicNumber u = random_unit(rng, prime, digits);
    return PadicNumber::from_unit(prime, valuation, u.unit(), digits);
}

}  // namespace padic
