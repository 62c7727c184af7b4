#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cubic/dh_okx.hpp"
#include "cubic/numtheory.hpp"

using namespace cubic;

namespace {

OkxLocal local_of(const BigInt& secret, uint32_t own, uint32_t guess) {
    return OkxLocal{secret, own, guess};
}

}  // namespace

TEST_CASE("setup enumerates the full root set") {
    const OkxParams params = okx_params_for_cipher(19, 2, 2, 9);
    CHECK(params.roots == std::vector<BigInt>{3, 16});

    // Some seed lands on c = 9; its root set must come out the same way.
    bool found = false;
    for (uint64_t s = 0; s < 400 && !found; ++s) {
        const OkxParams forced = okx_setup(19, 2, 2, s);
        if (forced.c != BigInt(9)) continue;
        CHECK(forced.roots == std::vector<BigInt>{3, 16});
        found = true;
    }
    CHECK(found);

    SplitMix64 seeds(0xA11CE);
    for (int i = 0; i < 50; ++i) {
        const OkxParams p2 = okx_setup(19, 2, 2, seeds.next());
        REQUIRE(p2.roots.size() == 2);
        CHECK(p2.roots[0] <= p2.roots[1]);
        CHECK(p2.roots[0] + p2.roots[1] == BigInt(19));  // negation symmetry
        for (const BigInt& r : p2.roots) CHECK(mod_pow(r, 2, 19) == p2.c);
    }

    const OkxParams p3 = okx_setup(31, 3, 3, 7);
    REQUIRE(p3.roots.size() == 3);
    for (const BigInt& r : p3.roots) CHECK(mod_pow(r, 3, 31) == p3.c);
    // brute force: exactly three residues cube to c
    size_t count = 0;
    for (uint64_t x = 1; x < 31; ++x)
        if (mod_pow(x, 3, 31) == p3.c) ++count;
    CHECK(count == 3);

    CHECK(okx_setup(19, 2, 2, 5).c == okx_setup(19, 2, 2, 5).c);  // deterministic
}

TEST_CASE("setup rejects bad parameters") {
    CHECK_THROWS_AS(okx_setup(13, 2, 2, 1), Error);          // 13 == 1 (mod 4)
    CHECK_THROWS_AS(okx_setup(15, 2, 2, 1), Error);          // not prime
    CHECK_THROWS_AS(okx_setup(19, 2, 3, 1), Error);          // 19 == 1 (mod 9)
    CHECK_THROWS_AS(okx_setup(11, 2, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(okx_setup(19, 1, 2, 1), std::invalid_argument);   // order 1
    CHECK_THROWS_AS(okx_setup(19, 18, 2, 1), std::invalid_argument);  // order 2
    CHECK_THROWS_AS(okx_params_for_cipher(19, 2, 2, 2), Error);       // 2 is a non-residue mod 19
}

TEST_CASE("messages match the worked constants") {
    const OkxParams params = okx_params_for_cipher(19, 2, 2, 9);
    CHECK(okx_message(params, local_of(7, 0, 0)) == BigInt(17));   // 2^(3+7)
    CHECK(okx_message(params, local_of(11, 0, 0)) == BigInt(6));   // 2^(3+11)
    // exponent hits a multiple of the group order: root 3, N = 15 -> 2^18 = 1
    CHECK(okx_message(params, local_of(15, 0, 0)) == BigInt(1));
    CHECK_THROWS_AS(okx_message(params, local_of(0, 0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(okx_message(params, local_of(18, 0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(okx_message(params, local_of(7, 2, 0)), std::invalid_argument);
}

TEST_CASE("keys for all four guess cases") {
    const OkxParams params = okx_params_for_cipher(19, 2, 2, 9);
    // Alice: N1 = 7, Bob: N2 = 11, both blind with root 3 (index 0).
    const BigInt msg_a = okx_message(params, local_of(7, 0, 0));
    const BigInt msg_b = okx_message(params, local_of(11, 0, 0));

    CHECK(okx_key(params, local_of(7, 0, 0), msg_b).value == BigInt(13));   // correct guess
    CHECK(okx_key(params, local_of(7, 0, 1), msg_b).value == BigInt(16));   // guessed 16
    CHECK(okx_key(params, local_of(11, 0, 1), msg_a).value == BigInt(7));   // Bob guessed 16
    CHECK(okx_key(params, local_of(11, 0, 0), msg_a).value == BigInt(13));

    CHECK_THROWS_AS(okx_key(params, local_of(7, 0, 0), BigInt(0)), Error);
    CHECK_THROWS_AS(okx_key(params, local_of(7, 0, 0), BigInt(19)), Error);
}

TEST_CASE("sessions reproduce the four-case table") {
    const OkxParams params = okx_params_for_cipher(19, 2, 2, 9);
    const auto case1 = okx_session(params, local_of(7, 0, 0), local_of(11, 0, 0));
    CHECK(case1.message_ab == BigInt(17));
    CHECK(case1.message_ba == BigInt(6));
    CHECK(case1.alice_key.value == BigInt(13));
    CHECK(case1.bob_key.value == BigInt(13));
    CHECK(case1.agreed);

    const auto case4 = okx_session(params, local_of(7, 0, 0), local_of(11, 0, 1));
    CHECK(case4.alice_key.value == BigInt(13));
    CHECK(case4.bob_key.value == BigInt(7));
    CHECK_FALSE(case4.agreed);
}

TEST_CASE("mutually correct guesses derive g^(N1*N2)") {
    SplitMix64 rng(0x9A3E5);
    const std::vector<std::pair<uint64_t, uint32_t>> param_choices = {
        {19, 2}, {23, 2}, {31, 2}, {31, 3}, {103, 3}, {1019, 2}, {61, 5}};
    int checked = 0;
    while (checked < 500) {
        const auto& [p, a] = param_choices[rng.below(param_choices.size())];
        const OkxParams params = okx_setup(p, 2 + rng.below(p - 3), a, rng.next());
        OkxLocal alice = random_local(params, rng);
        OkxLocal bob = random_local(params, rng);
        alice.guess_index = bob.own_root_index;
        bob.guess_index = alice.own_root_index;
        const auto result = okx_session(params, alice, bob);
        const BigInt expected = mod_pow(params.g, alice.secret * bob.secret, params.p);
        CHECK(result.alice_key.value == expected);
        CHECK(result.bob_key.value == expected);
        ++checked;
    }
}

TEST_CASE("transcripts do not pin down the root choice") {
    // Message with root x and secret N equals message with root y and
    // secret N + (x - y) adjusted mod p-1: the wire carries only the sum.
    SplitMix64 rng(0x0B11);
    const OkxParams params = okx_setup(103, 5, 3, 42);
    const BigInt span = params.p - 1;  // ord(g) divides p-1
    int checked = 0;
    while (checked < 200) {
        OkxLocal a = random_local(params, rng);
        const uint32_t other = static_cast<uint32_t>(rng.below(params.a));
        if (other == a.own_root_index) continue;
        const BigInt& rx = params.roots[a.own_root_index];
        const BigInt& ry = params.roots[other];
        const BigInt shifted = (a.secret + span + rx % span - ry % span) % span;
        if (shifted.is_zero() || shifted > params.p - 2) continue;
        OkxLocal b = a;
        b.own_root_index = other;
        b.secret = shifted;
        CHECK(okx_message(params, a) == okx_message(params, b));
        ++checked;
    }
}

TEST_CASE("agreement rate approaches 1/a^2") {
    const OkxParams p2 = okx_setup(100003, 2, 2, 0xF00D);
    const TrialStats s2 = okx_agreement_rate(p2, 4000, 0xFACE);
    const double sigma2 = std::sqrt(0.25 * 0.75 / 4000);
    CHECK(std::abs(s2.rate() - 0.25) < 4 * sigma2);

    PrimeSpec spec;
    spec.bit_length = 17;
    spec.congruences = {{BigInt(4), BigInt(3)}, {BigInt(9), BigInt(4)}};
    const OkxParams p3 = okx_setup(gen_prime(spec, 11), 2, 3, 0xF00D);
    const TrialStats s3 = okx_agreement_rate(p3, 4000, 0xFACE);
    const double expected = 1.0 / 9.0;
    const double sigma3 = std::sqrt(expected * (1 - expected) / 4000);
    CHECK(std::abs(s3.rate() - expected) < 4 * sigma3);

    CHECK(okx_agreement_rate(p2, 200, 7).successes ==
          okx_agreement_rate(p2, 200, 7).successes);
    const TrialStats one = okx_agreement_rate(p2, 1, 7);
    CHECK((one.rate() == 0.0 || one.rate() == 1.0));
}

TEST_CASE("transcript format") {
    const OkxParams params = okx_params_for_cipher(19, 2, 2, 9);
    const auto result = okx_session(params, local_of(7, 0, 0), local_of(11, 0, 0));
    CHECK(format_transcript(params, result) ==
          "params p=19 g=2 a=2 c=9 roots=3,16\n"
          "A->B 17\n"
          "B->A 6\n"
          "A key 13\n"
          "B key 13\n"
          "agreed true\n");
}
