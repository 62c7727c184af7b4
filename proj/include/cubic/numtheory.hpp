#pragma once

#include <cstdint>
#include <vector>

#include "cubic/bigint.hpp"
#include "cubic/errors.hpp"

namespace cubic {

// base^exp mod modulus, square-and-multiply. modulus >= 2.
BigInt mod_pow(const BigInt& base, const BigInt& exp, const BigInt& modulus);

// (a * b) mod modulus.
BigInt mod_mul(const BigInt& a, const BigInt& b, const BigInt& modulus);

// Multiplicative inverse of a mod modulus. Throws NotInvertibleError
// (carrying the gcd found) when gcd(a, modulus) != 1.
BigInt mod_inv(const BigInt& a, const BigInt& modulus);

// Square root of a mod p for p == 3 (mod 4), computed as a^((p+1)/4).
// The result is squared back internally; a non-residue throws NonResidue.
BigInt sqrt_mod(const BigInt& a, const BigInt& p);

// Miller-Rabin with `rounds` witnesses. Deterministic: below 1000 it is a
// table lookup, above that the witnesses come from a generator seeded by
// n itself, so repeated calls always agree.
bool is_probable_prime(const BigInt& n, uint32_t rounds = 40);

// Sum of base-10 digits. Diagnostic for auditing decryption-exponent
// branch rules; see cubic_cipher.
BigInt digit_sum(const BigInt& n);

// x mod m1*m2 with x == r1 (mod m1), x == r2 (mod m2). Throws NotCoprime.
BigInt crt_pair(const BigInt& r1, const BigInt& m1, const BigInt& r2, const BigInt& m2);

struct Congruence {
    BigInt modulus;
    BigInt residue;
};

// What gen_prime must produce: an exact-width probable prime lying in the
// intersection of the given congruence classes. Moduli must be pairwise
// coprime.
struct PrimeSpec {
    uint32_t bit_length = 32;  // >= 8
    std::vector<Congruence> congruences;
    uint32_t mr_rounds = 40;
};

// Seeded deterministic prime search: picks a random candidate in the
// combined congruence class, then steps by the class modulus, wrapping
// within [2^(bits-1), 2^bits). Gives up with SearchExhausted after
// 64 * bit_length candidates (or immediately when the class has no odd
// members).
BigInt gen_prime(const PrimeSpec& spec, uint64_t seed);

// Primes below 1000, ascending. Shared by the primality test and tests.
const std::vector<uint32_t>& small_prime_table();

}  // namespace cubic
