// BigInt arithmetic checked against boost::multiprecision as an
// independent oracle, plus the classic Knuth-D "add back" corner cases.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include "cubic/bigint.hpp"
#include "cubic/rng.hpp"

using cubic::BigInt;
using cubic::SplitMix64;
using boost_int = boost::multiprecision::cpp_int;

namespace {

boost_int to_boost(const BigInt& v) { return boost_int(v.to_decimal()); }

BigInt from_boost(const boost_int& v) { return BigInt::from_decimal(v.str()); }

BigInt random_value(SplitMix64& rng, size_t max_bits) {
    const size_t bits = rng.below(max_bits) + 1;
    return rng.random_bits(bits);
}

}  // namespace

TEST_CASE("small constructors and decimal roundtrip") {
    CHECK(BigInt().to_decimal() == "0");
    CHECK(BigInt(1).to_decimal() == "1");
    CHECK(BigInt(0xFFFFFFFFull).to_decimal() == "4294967295");
    CHECK(BigInt(0x100000000ull).to_decimal() == "4294967296");
    CHECK(BigInt(UINT64_MAX).to_decimal() == "18446744073709551615");
    CHECK(BigInt::from_decimal("340282366920938463463374607431768211456").to_decimal() ==
          "340282366920938463463374607431768211456");  // 2^128
    CHECK(BigInt::from_decimal("000123").to_decimal() == "123");
    CHECK_THROWS_AS(BigInt::from_decimal(""), std::invalid_argument);
    CHECK_THROWS_AS(BigInt::from_decimal("12x3"), std::invalid_argument);
}

TEST_CASE("comparisons and u64 conversion") {
    CHECK(BigInt(5) < BigInt(7));
    CHECK(BigInt(7) == BigInt(7));
    CHECK(BigInt::from_decimal("18446744073709551616") > BigInt(UINT64_MAX));
    CHECK(BigInt(12345).to_u64() == 12345);
    CHECK(BigInt(UINT64_MAX).to_u64() == UINT64_MAX);
    CHECK_THROWS_AS(BigInt::from_decimal("18446744073709551616").to_u64(), std::overflow_error);
}

TEST_CASE("bits and shifts") {
    const BigInt v = BigInt(1) << 100;
    CHECK(v.bit_length() == 101);
    CHECK(v.bit(100));
    CHECK_FALSE(v.bit(99));
    CHECK((v >> 100) == BigInt(1));
    CHECK((v >> 101).is_zero());
    CHECK(BigInt(0).bit_length() == 0);
    CHECK((BigInt(0b1011) >> 1) == BigInt(0b101));
    CHECK((BigInt(3) << 33).to_decimal() == "25769803776");
}

TEST_CASE("subtraction underflow throws") {
    CHECK_THROWS_AS(BigInt(3) - BigInt(4), std::underflow_error);
    CHECK((BigInt(4) - BigInt(4)).is_zero());
}

TEST_CASE("division by zero throws") {
    CHECK_THROWS_AS(BigInt(4) / BigInt(0), std::domain_error);
    CHECK_THROWS_AS(BigInt(4) % BigInt(0), std::domain_error);
    CHECK_THROWS_AS(BigInt(4).rem_u32(0), std::domain_error);
}

TEST_CASE("knuth division add-back corner cases") {
    // Dividends/divisors chosen so qhat overshoots and the add-back
    // branch runs; values from the classic divmnu test set.
    struct Case {
        std::vector<uint32_t> num, den;
    };
    const std::vector<Case> cases = {
        {{3, 0, 0x80000000u}, {1, 0, 0x20000000u}},
        {{3, 0, 0x00008000u}, {1, 0, 0x00002000u}},
        {{0, 0, 0x00008000u, 0x00007fffu}, {1, 0, 0x00008000u}},
    };
    for (const auto& c : cases) {
        auto build = [](const std::vector<uint32_t>& limbs) {
            BigInt v;
            for (size_t i = limbs.size(); i-- > 0;) {
                v <<= 32;
                v += BigInt(limbs[i]);
            }
            return v;
        };
        const BigInt num = build(c.num);
        const BigInt den = build(c.den);
        BigInt q, r;
        BigInt::divmod(num, den, q, r);
        CHECK(to_boost(q) == to_boost(num) / to_boost(den));
        CHECK(to_boost(r) == to_boost(num) % to_boost(den));
        CHECK(q * den + r == num);
    }
}

TEST_CASE("arithmetic agrees with boost oracle") {
    SplitMix64 rng(0xB16B00B5u);
    for (int iter = 0; iter < 4000; ++iter) {
        const BigInt a = random_value(rng, 300);
        const BigInt b = random_value(rng, 300);
        const boost_int ba = to_boost(a);
        const boost_int bb = to_boost(b);

        CHECK(to_boost(a + b) == ba + bb);
        CHECK(to_boost(a * b) == ba * bb);
        if (a >= b) CHECK(to_boost(a - b) == ba - bb);
        if (!b.is_zero()) {
            BigInt q, r;
            BigInt::divmod(a, b, q, r);
            CHECK(to_boost(q) == ba / bb);
            CHECK(to_boost(r) == ba % bb);
            CHECK(r < b);
        }
        const size_t sh = rng.below(96);
        CHECK(to_boost(a << sh) == ba << sh);
        CHECK(to_boost(a >> sh) == ba >> sh);
        CHECK(to_boost(cubic::gcd(a, b)) == boost::multiprecision::gcd(ba, bb));
        CHECK(from_boost(ba) == a);
    }
}

TEST_CASE("rem_u32 agrees with full division") {
    SplitMix64 rng(0x5EEDu);
    for (int iter = 0; iter < 500; ++iter) {
        const BigInt a = random_value(rng, 200);
        const uint32_t d = static_cast<uint32_t>(rng.below(0xFFFFFFFFull) + 1);
        CHECK(BigInt(a.rem_u32(d)) == a % BigInt(d));
    }
}

TEST_CASE("big-endian byte roundtrip") {
    SplitMix64 rng(7);
    CHECK(BigInt(0).to_bytes_be().empty());
    CHECK(BigInt::from_bytes_be(std::vector<uint8_t>{}) == BigInt(0));
    CHECK(BigInt(0x1F).to_bytes_be() == std::vector<uint8_t>{0x1F});
    CHECK(BigInt(0x0102).to_bytes_be() == (std::vector<uint8_t>{0x01, 0x02}));
    for (int iter = 0; iter < 300; ++iter) {
        const BigInt v = random_value(rng, 250);
        const auto bytes = v.to_bytes_be();
        if (!v.is_zero()) CHECK(bytes.front() != 0);  // minimal length
        CHECK(BigInt::from_bytes_be(bytes) == v);
    }
}
