#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cubic/bigint.hpp"
#include "cubic/oblivious.hpp"
#include "cubic/rng.hpp"

namespace cubic {

// Shared parameters of the oblivious key exchange: both parties know the
// full a-element root set of the common cipher c, but not which root the
// peer blinds its exponent with.
struct OkxParams {
    BigInt p;
    BigInt g;
    uint32_t a = 2;
    BigInt c;
    std::vector<BigInt> roots;  // ascending, each roots[i]^a == c (mod p)
};

// Per-party state: the blinding secret, which root this party adds to its
// own exponent, and its guess at the peer's choice.
struct OkxLocal {
    BigInt secret;             // N in [1, p-2]
    uint32_t own_root_index = 0;
    uint32_t guess_index = 0;
};

struct OkxKey {
    BigInt value;
};

struct OkxSessionResult {
    BigInt message_ab;  // what Alice sent
    BigInt message_ba;  // what Bob sent
    OkxKey alice_key;
    OkxKey bob_key;
    bool agreed = false;
};

// Random cipher c = r^a with the full root set enumerated. a = 2 needs
// p == 3 (mod 4); odd prime a needs p == 1 (mod a), p != 1 (mod a^2).
OkxParams okx_setup(const BigInt& p, const BigInt& g, uint32_t a, uint64_t seed);

// Same derivation for an externally agreed cipher; both peers compute an
// identical sorted root set from (p, a, c) alone.
OkxParams okx_params_for_cipher(const BigInt& p, const BigInt& g, uint32_t a, const BigInt& c);

// g^(roots[own] + N) mod p.
BigInt okx_message(const OkxParams& params, const OkxLocal& local);

// (peer_msg / g^(roots[guess]))^N mod p.
OkxKey okx_key(const OkxParams& params, const OkxLocal& local, const BigInt& peer_msg);

// Both directions at once; agreed means the derived key values are equal
// (the structural event is both guesses being correct, which makes both
// keys g^(N1*N2)).
OkxSessionResult okx_session(const OkxParams& params, const OkxLocal& alice, const OkxLocal& bob);

// Uniform N in [1, p-2], uniform independent root choice and guess.
OkxLocal random_local(const OkxParams& params, SplitMix64& rng);

// Agreement frequency over seeded trials (trial i uses seed XOR i).
// Expectation 1/a^2.
TrialStats okx_agreement_rate(const OkxParams& params, uint64_t trials, uint64_t seed);

// One line per protocol event: params, A->B, B->A, A key, B key, agreed.
std::string format_transcript(const OkxParams& params, const OkxSessionResult& result);

}  // namespace cubic
