#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cubic/bigint.hpp"
#include "cubic/cubic_cipher.hpp"

namespace cubic {

// One oblivious-transfer round. The factor is present exactly when the
// receiver's root differs from the sender's; it always divides n.
struct OtOutcome {
    std::optional<BigInt> revealed_factor;
    BigInt receiver_root;
    BigInt sender_root;
};

struct TrialStats {
    uint64_t trials = 0;
    uint64_t successes = 0;
    double rate() const { return static_cast<double>(successes) / static_cast<double>(trials); }
};

// gcd(x - x1, n) for two distinct a-th roots of the same cipher. Throws
// TrivialGcd when the gcd degenerates to 1 or n (which only happens when
// the roots coincide or are not actually roots of one cipher).
BigInt factor_from_roots(const BigInt& x, const BigInt& x1, const BigInt& n);

// The receiver draws one of the a roots of sender_root^a uniformly; a
// non-colliding draw factors the modulus.
OtOutcome ot_round(const CubicPrivateKey& priv, const BigInt& sender_root, uint64_t seed);

// Empirical factor-revelation rate over independent rounds with uniform
// random sender plaintexts. Trial i is seeded with master_seed XOR i, so
// runs reproduce and trials can be distributed.
TrialStats ot_success_rate(const CubicPrivateKey& priv, uint64_t trials, uint64_t seed);

// `a=<a> n_bits=<b> trials=<t> successes=<s> rate=<r>`
std::string format_stats_line(uint32_t a, size_t n_bits, const TrialStats& stats);

}  // namespace cubic
