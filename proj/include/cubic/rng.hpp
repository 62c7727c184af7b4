#pragma once

#include <cstdint>
#include <stdexcept>

#include "cubic/bigint.hpp"

namespace cubic {

// SplitMix64. Every randomized operation in this library takes an explicit
// 64-bit seed and draws from one of these, so runs reproduce exactly.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound), bound >= 1. Rejection keeps it unbiased.
    uint64_t below(uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("SplitMix64::below: zero bound");
        const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

    // Uniform in [0, bound) for arbitrary-precision bounds.
    BigInt below_big(const BigInt& bound) {
        if (bound.is_zero()) throw std::invalid_argument("SplitMix64::below_big: zero bound");
        if (bound.fits_u64()) return BigInt(below(bound.to_u64()));
        const size_t bits = bound.bit_length();
        while (true) {
            BigInt v = random_bits(bits);
            if (v < bound) return v;
        }
    }

    // Uniform value with at most `bits` random bits.
    BigInt random_bits(size_t bits) {
        BigInt v;
        size_t produced = 0;
        while (produced < bits) {
            v <<= 64;
            v += BigInt(next());
            produced += 64;
        }
        v >>= produced - bits;
        return v;
    }

private:
    uint64_t state_;
};

}  // namespace cubic
