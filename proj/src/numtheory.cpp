#include "cubic/numtheory.hpp"

#include <algorithm>
#include <stdexcept>

#include "cubic/rng.hpp"

namespace cubic {

BigInt mod_mul(const BigInt& a, const BigInt& b, const BigInt& modulus) {
    return (a * b) % modulus;
}

BigInt mod_pow(const BigInt& base, const BigInt& exp, const BigInt& modulus) {
    if (modulus < BigInt(2)) throw std::invalid_argument("mod_pow: modulus must be >= 2");
    BigInt b = base % modulus;
    BigInt result(1);
    for (size_t i = exp.bit_length(); i-- > 0;) {
        result = mod_mul(result, result, modulus);
        if (exp.bit(i)) result = mod_mul(result, b, modulus);
    }
    return result % modulus;
}

BigInt mod_inv(const BigInt& a, const BigInt& modulus) {
    if (modulus < BigInt(2)) throw std::invalid_argument("mod_inv: modulus must be >= 2");
    // Extended Euclid. The Bezout coefficients alternate in sign, so we
    // track magnitudes plus a parity flag and never need signed integers.
    BigInt r0 = modulus;
    BigInt r1 = a % modulus;
    BigInt t0;         // |coefficient| paired with r0
    BigInt t1(1);      // |coefficient| paired with r1
    bool t0_negative = true;  // sign alternates each step; t0 is zero so only parity matters
    while (!r1.is_zero()) {
        BigInt q, r2;
        BigInt::divmod(r0, r1, q, r2);
        BigInt t2 = t0 + q * t1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        t0 = std::move(t1);
        t1 = std::move(t2);
        t0_negative = !t0_negative;
    }
    if (r0 != BigInt(1))
        throw NotInvertibleError(r0, "mod_inv: argument shares factor " + r0.to_decimal() +
                                         " with the modulus");
    t0 %= modulus;
    if (t0_negative && !t0.is_zero()) t0 = modulus - t0;
    return t0;
}

BigInt sqrt_mod(const BigInt& a, const BigInt& p) {
    if (p.rem_u32(4) != 3)
        throw Error(Errc::BadPrimeClass, "sqrt_mod: prime must be 3 (mod 4)");
    const BigInt r = a % p;
    if (r.is_zero()) return r;
    const BigInt root = mod_pow(r, (p + BigInt(1)) >> 2, p);
    if (mod_mul(root, root, p) != r)
        throw Error(Errc::NonResidue, a.to_decimal() + " has no square root mod " + p.to_decimal());
    return root;
}

const std::vector<uint32_t>& small_prime_table() {
    static const std::vector<uint32_t> table = [] {
        std::vector<uint32_t> primes;
        std::vector<bool> sieve(1000, true);
        for (uint32_t i = 2; i < 1000; ++i) {
            if (!sieve[i]) continue;
            primes.push_back(i);
            for (uint32_t j = i * i; j < 1000; j += i) sieve[j] = false;
        }
        return primes;
    }();
    return table;
}

bool is_probable_prime(const BigInt& n, uint32_t rounds) {
    if (rounds == 0) throw std::invalid_argument("is_probable_prime: rounds must be positive");
    const auto& table = small_prime_table();
    if (n < BigInt(1000)) {
        if (n < BigInt(2)) return false;
        const uint32_t v = static_cast<uint32_t>(n.to_u64());
        return std::binary_search(table.begin(), table.end(), v);
    }
    for (uint32_t p : table) {
        if (n.rem_u32(p) == 0) return false;
    }

    const BigInt n_minus_1 = n - BigInt(1);
    BigInt d = n_minus_1;
    size_t s = 0;
    while (d.is_even()) {
        d >>= 1;
        ++s;
    }

    // Witnesses are a pure function of n: same inputs, same verdict.
    uint64_t mix = 0x9E3779B97F4A7C15ull;
    for (size_t i = 0; i < n.bit_length(); i += 64) {
        uint64_t chunk = 0;
        for (size_t b = 0; b < 64 && i + b < n.bit_length(); ++b)
            chunk |= static_cast<uint64_t>(n.bit(i + b)) << b;
        mix = (mix ^ chunk) * 0xFF51AFD7ED558CCDull;
    }
    SplitMix64 rng(mix);

    const BigInt span = n - BigInt(3);  // witnesses in [2, n-2]
    for (uint32_t round = 0; round < rounds; ++round) {
        const BigInt a = rng.below_big(span) + BigInt(2);
        BigInt x = mod_pow(a, d, n);
        if (x == BigInt(1) || x == n_minus_1) continue;
        bool composite = true;
        for (size_t i = 1; i < s; ++i) {
            x = mod_mul(x, x, n);
            if (x == n_minus_1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

BigInt digit_sum(const BigInt& n) {
    uint64_t sum = 0;
    for (char c : n.to_decimal()) sum += static_cast<uint64_t>(c - '0');
    return BigInt(sum);
}

BigInt crt_pair(const BigInt& r1, const BigInt& m1, const BigInt& r2, const BigInt& m2) {
    if (m1.is_zero() || m2.is_zero())
        throw std::invalid_argument("crt_pair: moduli must be positive");
    if (gcd(m1, m2) != BigInt(1))
        throw Error(Errc::NotCoprime, "crt_pair: moduli " + m1.to_decimal() + " and " +
                                          m2.to_decimal() + " share a factor");
    if (m2 == BigInt(1)) return r1 % m1;
    if (m1 == BigInt(1)) return r2 % m2;
    const BigInt a1 = r1 % m1;
    const BigInt a2 = r2 % m2;
    // x = a1 + m1 * ((a2 - a1) * m1^-1 mod m2)
    const BigInt diff = (a2 + m2 - (a1 % m2)) % m2;
    const BigInt t = mod_mul(diff, mod_inv(m1 % m2, m2), m2);
    return a1 + m1 * t;
}

BigInt gen_prime(const PrimeSpec& spec, uint64_t seed) {
    if (spec.bit_length < 8)
        throw std::invalid_argument("gen_prime: bit_length must be >= 8");
    if (spec.mr_rounds == 0)
        throw std::invalid_argument("gen_prime: mr_rounds must be positive");

    BigInt mod(1);
    BigInt res(0);
    for (const Congruence& c : spec.congruences) {
        if (c.modulus < BigInt(2))
            throw std::invalid_argument("gen_prime: congruence modulus must be >= 2");
        if (c.residue >= c.modulus)
            throw std::invalid_argument("gen_prime: congruence residue must be < its modulus");
        res = crt_pair(res, mod, c.residue, c.modulus);  // NotCoprime surfaces here
        mod *= c.modulus;
    }
    if (mod.is_even()) {
        if (res.is_even())
            throw Error(Errc::SearchExhausted, "gen_prime: congruence class holds only even numbers");
    } else {
        res = crt_pair(res, mod, BigInt(1), BigInt(2));
        mod <<= 1;
    }

    const BigInt lo = BigInt(1) << (spec.bit_length - 1);
    const BigInt hi = (BigInt(1) << spec.bit_length) - BigInt(1);
    const BigInt delta = (res + mod - (lo % mod)) % mod;
    const BigInt first = lo + delta;
    if (first > hi)
        throw Error(Errc::SearchExhausted,
                    "gen_prime: no candidate of " + std::to_string(spec.bit_length) +
                        " bits in the congruence class");
    const BigInt count = (hi - first) / mod + BigInt(1);

    SplitMix64 rng(seed);
    BigInt candidate = first + rng.below_big(count) * mod;
    const uint64_t max_attempts = 64ull * spec.bit_length;
    for (uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
        if (is_probable_prime(candidate, spec.mr_rounds)) return candidate;
        candidate += mod;
        if (candidate > hi) candidate = first;
    }
    throw Error(Errc::SearchExhausted,
                "gen_prime: no prime found after " + std::to_string(max_attempts) + " candidates");
}

}  // namespace cubic
