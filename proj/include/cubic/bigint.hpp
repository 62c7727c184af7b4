#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cubic {

// Arbitrary-precision unsigned integer.
//
// Storage is little-endian 32-bit limbs, normalized so the top limb is
// nonzero (no limbs at all means zero). All arithmetic is schoolbook with
// Knuth-D division; key sizes here are desk-scale, so no fancier kernels
// are warranted. Subtraction below zero throws, this type has no sign.
class BigInt {
public:
    BigInt() = default;
    BigInt(uint64_t v);  // implicit on purpose: lets call sites mix literals

    static BigInt from_decimal(std::string_view text);
    static BigInt from_bytes_be(std::span<const uint8_t> bytes);

    std::string to_decimal() const;
    // Minimal-length big-endian bytes; empty for zero.
    std::vector<uint8_t> to_bytes_be() const;

    bool fits_u64() const { return limbs_.size() <= 2; }
    uint64_t to_u64() const;  // throws std::overflow_error when too wide

    bool is_zero() const { return limbs_.empty(); }
    bool is_odd() const { return !limbs_.empty() && (limbs_[0] & 1u); }
    bool is_even() const { return !is_odd(); }

    bool bit(size_t i) const;
    // Index of the highest set bit plus one; 0 for zero.
    size_t bit_length() const;

    BigInt& operator+=(const BigInt& rhs);
    BigInt& operator-=(const BigInt& rhs);  // throws std::underflow_error
    BigInt& operator*=(const BigInt& rhs);
    BigInt& operator/=(const BigInt& rhs);
    BigInt& operator%=(const BigInt& rhs);
    BigInt& operator<<=(size_t bits);
    BigInt& operator>>=(size_t bits);

    friend BigInt operator+(BigInt lhs, const BigInt& rhs) { return lhs += rhs; }
    friend BigInt operator-(BigInt lhs, const BigInt& rhs) { return lhs -= rhs; }
    friend BigInt operator*(const BigInt& lhs, const BigInt& rhs) { return mul(lhs, rhs); }
    friend BigInt operator/(const BigInt& lhs, const BigInt& rhs);
    friend BigInt operator%(const BigInt& lhs, const BigInt& rhs);
    friend BigInt operator<<(BigInt lhs, size_t bits) { return lhs <<= bits; }
    friend BigInt operator>>(BigInt lhs, size_t bits) { return lhs >>= bits; }

    // Quotient and remainder in one pass. Divisor of zero throws
    // std::domain_error.
    static void divmod(const BigInt& num, const BigInt& den, BigInt& quot, BigInt& rem);

    // Remainder by a machine-word divisor, used by sieves and printing.
    uint32_t rem_u32(uint32_t den) const;

    friend bool operator==(const BigInt& lhs, const BigInt& rhs) = default;
    friend std::strong_ordering operator<=>(const BigInt& lhs, const BigInt& rhs);

    friend std::ostream& operator<<(std::ostream& os, const BigInt& v);

private:
    static BigInt mul(const BigInt& lhs, const BigInt& rhs);
    static void divmod_knuth(const BigInt& num, const BigInt& den, BigInt& quot, BigInt& rem);
    void trim();

    std::vector<uint32_t> limbs_;
};

BigInt gcd(BigInt a, BigInt b);

}  // namespace cubic
