#include "cubic/dh_okx.hpp"

#include <algorithm>
#include <sstream>

#include "cubic/cubic_cipher.hpp"
#include "cubic/numtheory.hpp"

namespace cubic {

namespace {

void check_params_classes(const BigInt& p, const BigInt& g, uint32_t a) {
    if (!is_probable_prime(p, 40))
        throw Error(Errc::BadPrimeClass, p.to_decimal() + " is not prime");
    if (a == 2) {
        if (p.rem_u32(4) != 3)
            throw Error(Errc::BadPrimeClass, "a=2 requires p == 3 (mod 4)");
    } else {
        if (a < 3 || !(a & 1u) || !is_probable_prime(BigInt(a), 40))
            throw std::invalid_argument("exponent a must be 2 or an odd prime");
        if (p.rem_u32(a) != 1)
            throw Error(Errc::BadPrimeClass, "p must be 1 (mod " + std::to_string(a) + ")");
        if (p.rem_u32(a * a) == 1)
            throw Error(Errc::BadPrimeClass,
                        "p must not be 1 (mod " + std::to_string(a * a) + ")");
    }
    // Order-1 and order-2 bases make every message a power of +-1.
    if (g.is_zero() || g == BigInt(1) || g == p - 1 || g >= p)
        throw std::invalid_argument("base g must satisfy 1 < g < p-1");
}

std::vector<BigInt> derive_roots(const BigInt& p, uint32_t a, const BigInt& c) {
    if (c.is_zero() || c >= p) throw Error(Errc::OutOfRange, "cipher c must lie in [1, p)");
    std::vector<BigInt> roots;
    if (a == 2) {
        const BigInt r = sqrt_mod(c, p);  // NonResidue when c has no roots
        roots = {r, p - r};
    } else {
        const BigInt e = mod_inv(BigInt(a), (p - 1) / BigInt(a));
        const BigInt r = mod_pow(c, e, p);
        if (mod_pow(r, BigInt(a), p) != c)
            throw Error(Errc::NonResidue,
                        c.to_decimal() + " is not an a-th power residue mod " + p.to_decimal());
        const BigInt omega = unity_root(p, a);
        BigInt cur = r;
        for (uint32_t i = 0; i < a; ++i) {
            roots.push_back(cur);
            cur = mod_mul(cur, omega, p);
        }
    }
    std::sort(roots.begin(), roots.end());
    if (std::adjacent_find(roots.begin(), roots.end()) != roots.end())
        throw Error(Errc::DegenerateRoots, "root set of c is not distinct");
    return roots;
}

void check_local(const OkxParams& params, const OkxLocal& local) {
    if (local.own_root_index >= params.a || local.guess_index >= params.a)
        throw std::invalid_argument("root index out of range");
    if (local.secret.is_zero() || local.secret > params.p - 2)
        throw std::invalid_argument("secret N must lie in [1, p-2]");
}

}  // namespace

OkxParams okx_setup(const BigInt& p, const BigInt& g, uint32_t a, uint64_t seed) {
    check_params_classes(p, g, a);
    SplitMix64 rng(seed);
    const BigInt r = rng.below_big(p - 1) + 1;
    const BigInt c = mod_pow(r, BigInt(a), p);
    std::vector<BigInt> roots = derive_roots(p, a, c);
    return OkxParams{p, g, a, c, std::move(roots)};
}

OkxParams okx_params_for_cipher(const BigInt& p, const BigInt& g, uint32_t a, const BigInt& c) {
    check_params_classes(p, g, a);
    std::vector<BigInt> roots = derive_roots(p, a, c);
    return OkxParams{p, g, a, c, std::move(roots)};
}

BigInt okx_message(const OkxParams& params, const OkxLocal& local) {
    check_local(params, local);
    return mod_pow(params.g, params.roots[local.own_root_index] + local.secret, params.p);
}

OkxKey okx_key(const OkxParams& params, const OkxLocal& local, const BigInt& peer_msg) {
    check_local(params, local);
    if (peer_msg.is_zero() || peer_msg >= params.p)
        throw Error(Errc::OutOfRange, "peer message must lie in (0, p)");
    const BigInt guessed = mod_pow(params.g, params.roots[local.guess_index], params.p);
    const BigInt base = mod_mul(peer_msg, mod_inv(guessed, params.p), params.p);
    return OkxKey{mod_pow(base, local.secret, params.p)};
}

OkxSessionResult okx_session(const OkxParams& params, const OkxLocal& alice, const OkxLocal& bob) {
    OkxSessionResult result;
    result.message_ab = okx_message(params, alice);
    result.message_ba = okx_message(params, bob);
    result.alice_key = okx_key(params, alice, result.message_ba);
    result.bob_key = okx_key(params, bob, result.message_ab);
    result.agreed = result.alice_key.value == result.bob_key.value;
    return result;
}

OkxLocal random_local(const OkxParams& params, SplitMix64& rng) {
    OkxLocal local;
    local.secret = rng.below_big(params.p - 2) + 1;
    local.own_root_index = static_cast<uint32_t>(rng.below(params.a));
    local.guess_index = static_cast<uint32_t>(rng.below(params.a));
    return local;
}

TrialStats okx_agreement_rate(const OkxParams& params, uint64_t trials, uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("okx_agreement_rate: trials must be >= 1");
    TrialStats stats{trials, 0};
    for (uint64_t i = 0; i < trials; ++i) {
        SplitMix64 rng(seed ^ i);
        const OkxLocal alice = random_local(params, rng);
        const OkxLocal bob = random_local(params, rng);
        if (okx_session(params, alice, bob).agreed) ++stats.successes;
    }
    return stats;
}

std::string format_transcript(const OkxParams& params, const OkxSessionResult& result) {
    std::ostringstream out;
    out << "params p=" << params.p << " g=" << params.g << " a=" << params.a
        << " c=" << params.c << " roots=";
    for (size_t i = 0; i < params.roots.size(); ++i) {
        if (i) out << ",";
        out << params.roots[i];
    }
    out << "\n";
    out << "A->B " << result.message_ab << "\n";
    out << "B->A " << result.message_ba << "\n";
    out << "A key " << result.alice_key.value << "\n";
    out << "B key " << result.bob_key.value << "\n";
    out << "agreed " << (result.agreed ? "true" : "false") << "\n";
    return out.str();
}

}  // namespace cubic
