#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <numeric>
#include <thread>

#include "cubic/errors.hpp"
#include "cubic/numtheory.hpp"
#include "cubic/rng.hpp"

using namespace cubic;

TEST_CASE("mod_pow basics") {
    CHECK(mod_pow(7, 3, 31) == BigInt(2));
    CHECK(mod_pow(2, 7, 31) == BigInt(4));
    CHECK(mod_pow(123456789, 0, 97) == BigInt(1));
    CHECK(mod_pow(0, 5, 97) == BigInt(0));
    CHECK(mod_pow(5, 1, 5) == BigInt(0));
    CHECK_THROWS_AS(mod_pow(2, 3, 1), std::invalid_argument);
}

TEST_CASE("mod_pow is multiplicative in the exponent") {
    SplitMix64 rng(0xABCDEF);
    for (int iter = 0; iter < 1000; ++iter) {
        const BigInt m = rng.random_bits(1 + rng.below(64)) + 2;
        const BigInt a = rng.below_big(m);
        const BigInt e1 = rng.random_bits(1 + rng.below(48));
        const BigInt e2 = rng.random_bits(1 + rng.below(48));
        CHECK(mod_pow(a, e1 + e2, m) == mod_mul(mod_pow(a, e1, m), mod_pow(a, e2, m), m));
    }
}

TEST_CASE("mod_inv examples") {
    CHECK(mod_inv(2, 19) == BigInt(10));
    CHECK(mod_inv(1, 97) == BigInt(1));
    try {
        mod_inv(5, 35);
        FAIL("expected NotInvertibleError");
    } catch (const NotInvertibleError& e) {
        CHECK(e.gcd() == BigInt(5));
    }
    try {
        mod_inv(0, 7);
        FAIL("expected NotInvertibleError");
    } catch (const NotInvertibleError& e) {
        CHECK(e.gcd() == BigInt(7));
    }
}

TEST_CASE("mod_inv then multiply yields one") {
    SplitMix64 rng(0x1234);
    int checked = 0;
    while (checked < 1000) {
        const BigInt m = rng.random_bits(1 + rng.below(80)) + 2;
        const BigInt a = rng.below_big(m);
        if (gcd(a, m) != BigInt(1)) continue;
        const BigInt inv = mod_inv(a, m);
        CHECK(inv < m);
        CHECK(mod_mul(a, inv, m) == BigInt(1) % m);
        ++checked;
    }
}

TEST_CASE("sqrt_mod examples") {
    CHECK(sqrt_mod(9, 19) == BigInt(16));  // the other root is 3
    CHECK(sqrt_mod(28, 31) == BigInt(20));
    CHECK(mod_mul(20, 20, 31) == BigInt(28));
    CHECK(sqrt_mod(0, 19) == BigInt(0));
    CHECK_THROWS_AS(sqrt_mod(5, 13), Error);  // 13 == 1 (mod 4)
    try {
        sqrt_mod(2, 7);  // 2 is a QR mod 7; 3 is not
        sqrt_mod(3, 7);
        FAIL("expected NonResidue");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NonResidue);
    }
}

TEST_CASE("sqrt_mod inverts squaring for random blum primes") {
    SplitMix64 rng(0xB10B);
    for (int iter = 0; iter < 500; ++iter) {
        PrimeSpec spec;
        spec.bit_length = 9 + static_cast<uint32_t>(rng.below(24));  // < 2^32
        spec.congruences = {{BigInt(4), BigInt(3)}};
        const BigInt p = gen_prime(spec, rng.next());
        const BigInt r = rng.below_big(p - 1) + 1;
        const BigInt root = sqrt_mod(mod_mul(r, r, p), p);
        const bool matches = (root == r) || (root == p - r);
        CHECK(matches);
    }
}

TEST_CASE("is_probable_prime basics") {
    CHECK(is_probable_prime(31, 40));
    CHECK_FALSE(is_probable_prime(35, 40));
    CHECK_FALSE(is_probable_prime(1, 40));
    CHECK_FALSE(is_probable_prime(0, 40));
    CHECK(is_probable_prime(2, 40));
    CHECK(is_probable_prime(997, 40));
    CHECK_FALSE(is_probable_prime(999, 40));
    // Carmichael and strong-pseudoprime stress values.
    CHECK_FALSE(is_probable_prime(8911, 40));
    CHECK_FALSE(is_probable_prime(BigInt::from_decimal("3215031751"), 40));
    CHECK_FALSE(is_probable_prime(BigInt::from_decimal("3825123056546413051"), 40));
    CHECK(is_probable_prime(BigInt::from_decimal("2305843009213693951"), 40));  // 2^61 - 1
    CHECK_THROWS_AS(is_probable_prime(31, 0), std::invalid_argument);
}

TEST_CASE("digit_sum") {
    CHECK(digit_sum(30) == BigInt(3));
    CHECK(digit_sum(0) == BigInt(0));
    CHECK(digit_sum(66) == BigInt(12));
    CHECK(digit_sum(BigInt::from_decimal("999999999999")) == BigInt(108));
}

TEST_CASE("crt_pair examples") {
    CHECK(crt_pair(2, 7, 1, 5) == BigInt(16));
    CHECK(crt_pair(0, 7, 0, 5) == BigInt(0));
    CHECK(crt_pair(3, 11, 3, 8) == BigInt(3));  // shared residue stays put
    try {
        crt_pair(1, 6, 1, 8);
        FAIL("expected NotCoprime");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotCoprime);
    }
}

TEST_CASE("crt_pair inverts the reductions") {
    // Exhaustive over every residue pair while the product is small;
    // deterministic sample of residues for the larger products.
    SplitMix64 rng(0xC47);
    for (uint64_t m1 = 2; m1 * 2 < 10000; ++m1) {
        for (uint64_t m2 = m1 + 1; m1 * m2 < 10000; ++m2) {
            if (std::gcd(m1, m2) != 1) continue;
            const uint64_t n = m1 * m2;
            if (n < 3000) {
                for (uint64_t x = 0; x < n; ++x) {
                    const BigInt back = crt_pair(x % m1, m1, x % m2, m2);
                    REQUIRE(back == BigInt(x));
                }
            } else {
                for (int k = 0; k < 24; ++k) {
                    const uint64_t x = rng.below(n);
                    const BigInt back = crt_pair(x % m1, m1, x % m2, m2);
                    REQUIRE(back == BigInt(x));
                }
            }
        }
    }
}

TEST_CASE("gen_prime honors spec and seed") {
    PrimeSpec spec;
    spec.bit_length = 8;
    spec.congruences = {{BigInt(4), BigInt(3)}, {BigInt(9), BigInt(7)}};  // p == 7 (mod 36)
    const BigInt p = gen_prime(spec, 42);
    CHECK(p.bit_length() == 8);
    CHECK(p.rem_u32(4) == 3);
    CHECK(p.rem_u32(9) == 7);
    CHECK(p.rem_u32(36) == 7);
    CHECK(is_probable_prime(p, 64));
    CHECK(gen_prime(spec, 42) == p);       // deterministic
    CHECK(gen_prime(spec, 43) == gen_prime(spec, 43));
}

TEST_CASE("gen_prime random specs satisfy all congruences") {
    SplitMix64 rng(0x6E47);
    for (int iter = 0; iter < 60; ++iter) {
        PrimeSpec spec;
        spec.bit_length = 10 + static_cast<uint32_t>(rng.below(30));
        const uint64_t m1 = 3 + rng.below(20);
        spec.congruences = {{BigInt(m1), BigInt(rng.below(m1))}};
        BigInt p;
        try {
            p = gen_prime(spec, rng.next());
        } catch (const Error& e) {
            CHECK(e.code() == Errc::SearchExhausted);  // residue class may be all-composite
            continue;
        }
        CHECK(p.bit_length() == spec.bit_length);
        CHECK(p % BigInt(m1) == spec.congruences[0].residue);
        CHECK(is_probable_prime(p, 64));
    }
}

TEST_CASE("operations are safe to call from several threads") {
    // Everything is a pure function of its arguments; concurrent calls on
    // shared inputs must agree with the single-threaded answers.
    SplitMix64 rng(0x7EAD);
    struct Query {
        BigInt base, exp, mod;
        BigInt expected;
    };
    std::vector<Query> queries;
    for (int i = 0; i < 64; ++i) {
        Query q;
        q.mod = rng.random_bits(1 + rng.below(64)) + 2;
        q.base = rng.below_big(q.mod);
        q.exp = rng.random_bits(32);
        q.expected = mod_pow(q.base, q.exp, q.mod);
        queries.push_back(std::move(q));
    }
    std::vector<std::thread> workers;
    std::atomic<int> mismatches{0};
    for (int t = 0; t < 4; ++t) {
        workers.emplace_back([&] {
            for (int pass = 0; pass < 20; ++pass)
                for (const Query& q : queries)
                    if (mod_pow(q.base, q.exp, q.mod) != q.expected) ++mismatches;
        });
    }
    for (auto& w : workers) w.join();
    CHECK(mismatches == 0);
}

TEST_CASE("gen_prime unsatisfiable classes") {
    PrimeSpec even;
    even.bit_length = 16;
    even.congruences = {{BigInt(4), BigInt(0)}};
    try {
        gen_prime(even, 1);
        FAIL("expected SearchExhausted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SearchExhausted);
    }

    PrimeSpec conflicting;
    conflicting.bit_length = 16;
    conflicting.congruences = {{BigInt(6), BigInt(1)}, {BigInt(10), BigInt(1)}};
    CHECK_THROWS_AS(gen_prime(conflicting, 1), Error);  // moduli share factor 2
}
