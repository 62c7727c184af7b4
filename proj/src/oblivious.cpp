#include "cubic/oblivious.hpp"

#include <cstdio>

#include "cubic/numtheory.hpp"
#include "cubic/rng.hpp"

namespace cubic {

BigInt factor_from_roots(const BigInt& x, const BigInt& x1, const BigInt& n) {
    const BigInt diff = x >= x1 ? x - x1 : x1 - x;
    const BigInt g = gcd(diff % n, n);
    if (g == BigInt(1) || g == n)
        throw Error(Errc::TrivialGcd, "gcd(" + x.to_decimal() + " - " + x1.to_decimal() + ", " +
                                          n.to_decimal() + ") is trivial");
    return g;
}

OtOutcome ot_round(const CubicPrivateKey& priv, const BigInt& sender_root, uint64_t seed) {
    if (priv.mode != KeyMode::Composite)
        throw std::invalid_argument("ot_round: composite-mode key required");
    const BigInt c = encrypt(sender_root, priv.pub);
    const std::vector<BigInt> roots = all_roots(c, priv.pub, sender_root);
    SplitMix64 rng(seed);
    const BigInt& receiver_root = roots[rng.below(priv.pub.a)];
    OtOutcome outcome{std::nullopt, receiver_root, sender_root};
    if (receiver_root != sender_root)
        outcome.revealed_factor = factor_from_roots(receiver_root, sender_root, priv.pub.n);
    return outcome;
}

TrialStats ot_success_rate(const CubicPrivateKey& priv, uint64_t trials, uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("ot_success_rate: trials must be >= 1");
    if (priv.mode != KeyMode::Composite)
        throw std::invalid_argument("ot_success_rate: composite-mode key required");
    TrialStats stats{trials, 0};
    const BigInt& n = priv.pub.n;
    for (uint64_t i = 0; i < trials; ++i) {
        SplitMix64 rng(seed ^ i);
        BigInt m;
        do {
            m = rng.below_big(n - 1) + 1;
        } while (gcd(m, n) != BigInt(1));
        const OtOutcome outcome = ot_round(priv, m, rng.next());
        if (outcome.revealed_factor) ++stats.successes;
    }
    return stats;
}

std::string format_stats_line(uint32_t a, size_t n_bits, const TrialStats& stats) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "a=%u n_bits=%zu trials=%llu successes=%llu rate=%.6f", a,
                  n_bits, static_cast<unsigned long long>(stats.trials),
                  static_cast<unsigned long long>(stats.successes), stats.rate());
    return buf;
}

}  // namespace cubic
