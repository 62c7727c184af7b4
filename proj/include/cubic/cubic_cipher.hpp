#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cubic/bigint.hpp"
#include "cubic/errors.hpp"

namespace cubic {

enum class KeyMode { Prime, Composite };

// Public half: modulus, a primitive a-th root of unity, and the exponent.
// The root of unity is what lets anyone enumerate the full root set of a
// cipher once a single root is known.
struct CubicPublicKey {
    BigInt n;
    BigInt alpha;
    uint32_t a = 3;
};

struct CubicPrivateKey {
    CubicPublicKey pub;
    KeyMode mode = KeyMode::Prime;
    BigInt p;
    BigInt q;    // zero in prime mode
    BigInt phi;  // p-1, or (p-1)(q-1)
    BigInt e;    // decryption exponent, a*e == 1 (mod phi/a)
};

struct RankedCiphertext {
    BigInt c;
    uint32_t rank = 0;  // 1-based position of the plaintext among the sorted roots
};

// Primitive a-th root of unity mod p. For a = 3 with p == 3 (mod 4) this
// uses the closed form via sqrt(p - 3) and returns the smaller of the two
// primitive roots; otherwise it searches successive bases h = 2, 3, ...
// for h^((p-1)/a) != 1. Requires p == 1 (mod a).
BigInt unity_root(const BigInt& p, uint32_t a);

// Fresh key with bits_per_prime-bit factors. Prime mode: n = p with
// p == 3 (mod 4), p == 1 (mod a), p != 1 (mod a^2). Composite mode adds a
// same-width q with q != 1 (mod a). Deterministic per seed.
CubicPrivateKey keygen(uint32_t bits_per_prime, KeyMode mode, uint32_t a, uint64_t seed);

// Assemble a key from explicitly chosen primes (validated against the
// same congruence requirements keygen enforces).
CubicPrivateKey key_from_primes(const BigInt& p, const std::optional<BigInt>& q, uint32_t a);

// m^a mod n for m in [1, n). Composite moduli additionally require
// gcd(m, n) = 1; anything else would hand out a factor.
BigInt encrypt(const BigInt& m, const CubicPublicKey& pub);

// One a-th root of c, namely c^e. Verifies (c^e)^a == c and throws
// RootCheckFailed on malformed input.
BigInt extract_root(const BigInt& c, const CubicPrivateKey& priv);

// All a roots of c given one of them, ascending. one_root must itself be
// a root of c.
std::vector<BigInt> all_roots(const BigInt& c, const CubicPublicKey& pub, const BigInt& one_root);

// 1-based position of m among the sorted roots of its own cipher.
uint32_t rank_of(const BigInt& m, const CubicPublicKey& pub);

// Needs only public data: the sender can rank its own plaintext.
RankedCiphertext encrypt_ranked(const BigInt& m, const CubicPublicKey& pub);

// Root extraction plus rank selection; inverse of encrypt_ranked.
BigInt decrypt_ranked(const RankedCiphertext& rc, const CubicPrivateKey& priv);

// Key file format: `name=value` lines, decimal values, fixed order
// version, mode, a, n, alpha and for private keys p, q, phi, e (the q
// line is omitted in prime mode).
std::string format_public_key(const CubicPrivateKey& key);
std::string format_private_key(const CubicPrivateKey& key);

struct LoadedKey {
    bool has_private = false;
    CubicPrivateKey key;  // pub/mode always set; private fields only when has_private
};

LoadedKey parse_key(const std::string& text);
LoadedKey load_key_file(const std::string& path);
void save_key_file(const std::string& path, const std::string& contents);

}  // namespace cubic
