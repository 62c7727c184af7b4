#include "cubic/bigint.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <ostream>
#include <stdexcept>

namespace cubic {

namespace {
constexpr uint64_t kLimbBase = 1ull << 32;
}

BigInt::BigInt(uint64_t v) {
    if (v) {
        limbs_.push_back(static_cast<uint32_t>(v));
        if (v >> 32) limbs_.push_back(static_cast<uint32_t>(v >> 32));
    }
}

void BigInt::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

uint64_t BigInt::to_u64() const {
    if (!fits_u64()) throw std::overflow_error("BigInt: value does not fit in 64 bits");
    uint64_t v = 0;
    if (limbs_.size() > 1) v = static_cast<uint64_t>(limbs_[1]) << 32;
    if (!limbs_.empty()) v |= limbs_[0];
    return v;
}

bool BigInt::bit(size_t i) const {
    const size_t limb = i / 32;
    if (limb >= limbs_.size()) return false;
    return (limbs_[limb] >> (i % 32)) & 1u;
}

size_t BigInt::bit_length() const {
    if (limbs_.empty()) return 0;
    return 32 * limbs_.size() - std::countl_zero(limbs_.back());
}

std::strong_ordering operator<=>(const BigInt& lhs, const BigInt& rhs) {
    if (lhs.limbs_.size() != rhs.limbs_.size())
        return lhs.limbs_.size() <=> rhs.limbs_.size();
    for (size_t i = lhs.limbs_.size(); i-- > 0;) {
        if (lhs.limbs_[i] != rhs.limbs_[i]) return lhs.limbs_[i] <=> rhs.limbs_[i];
    }
    return std::strong_ordering::equal;
}

BigInt& BigInt::operator+=(const BigInt& rhs) {
    const size_t n = std::max(limbs_.size(), rhs.limbs_.size());
    limbs_.resize(n, 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < n; ++i) {
        uint64_t sum = carry + limbs_[i];
        if (i < rhs.limbs_.size()) sum += rhs.limbs_[i];
        limbs_[i] = static_cast<uint32_t>(sum);
        carry = sum >> 32;
    }
    if (carry) limbs_.push_back(static_cast<uint32_t>(carry));
    return *this;
}

BigInt& BigInt::operator-=(const BigInt& rhs) {
    if (*this < rhs) throw std::underflow_error("BigInt: subtraction below zero");
    uint64_t borrow = 0;
    for (size_t i = 0; i < limbs_.size(); ++i) {
        uint64_t sub = borrow;
        if (i < rhs.limbs_.size())
            sub += rhs.limbs_[i];
        else if (borrow == 0)
            break;
        uint64_t cur = static_cast<uint64_t>(limbs_[i]) - sub;
        limbs_[i] = static_cast<uint32_t>(cur);
        borrow = (cur >> 32) ? 1 : 0;
    }
    trim();
    return *this;
}

BigInt BigInt::mul(const BigInt& lhs, const BigInt& rhs) {
    BigInt out;
    if (lhs.is_zero() || rhs.is_zero()) return out;
    out.limbs_.assign(lhs.limbs_.size() + rhs.limbs_.size(), 0);
    for (size_t i = 0; i < lhs.limbs_.size(); ++i) {
        uint64_t carry = 0;
        const uint64_t a = lhs.limbs_[i];
        for (size_t j = 0; j < rhs.limbs_.size(); ++j) {
            uint64_t cur = out.limbs_[i + j] + a * rhs.limbs_[j] + carry;
            out.limbs_[i + j] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        out.limbs_[i + rhs.limbs_.size()] = static_cast<uint32_t>(carry);
    }
    out.trim();
    return out;
}

BigInt& BigInt::operator*=(const BigInt& rhs) {
    *this = mul(*this, rhs);
    return *this;
}

BigInt& BigInt::operator<<=(size_t bits) {
    if (is_zero() || bits == 0) return *this;
    const size_t limb_shift = bits / 32;
    const unsigned s = bits % 32;
    const size_t old = limbs_.size();
    limbs_.resize(old + limb_shift + 1, 0);
    for (size_t i = old; i-- > 0;) {
        const uint64_t v = static_cast<uint64_t>(limbs_[i]) << s;
        limbs_[i + limb_shift + 1] |= static_cast<uint32_t>(v >> 32);
        limbs_[i + limb_shift] = static_cast<uint32_t>(v);
    }
    for (size_t i = 0; i < limb_shift; ++i) limbs_[i] = 0;
    trim();
    return *this;
}

BigInt& BigInt::operator>>=(size_t bits) {
    if (is_zero() || bits == 0) return *this;
    const size_t limb_shift = bits / 32;
    const unsigned s = bits % 32;
    if (limb_shift >= limbs_.size()) {
        limbs_.clear();
        return *this;
    }
    const size_t n = limbs_.size() - limb_shift;
    for (size_t i = 0; i < n; ++i) {
        uint64_t v = limbs_[i + limb_shift] >> s;
        if (s && i + limb_shift + 1 < limbs_.size())
            v |= static_cast<uint64_t>(limbs_[i + limb_shift + 1]) << (32 - s);
        limbs_[i] = static_cast<uint32_t>(v);
    }
    limbs_.resize(n);
    trim();
    return *this;
}

void BigInt::divmod(const BigInt& num, const BigInt& den, BigInt& quot, BigInt& rem) {
    if (den.is_zero()) throw std::domain_error("BigInt: division by zero");
    if (num < den) {
        rem = num;
        quot = BigInt();
        return;
    }
    if (den.limbs_.size() == 1) {
        const uint32_t d = den.limbs_[0];
        BigInt q;
        q.limbs_.resize(num.limbs_.size());
        uint64_t r = 0;
        for (size_t i = num.limbs_.size(); i-- > 0;) {
            const uint64_t cur = (r << 32) | num.limbs_[i];
            q.limbs_[i] = static_cast<uint32_t>(cur / d);
            r = cur % d;
        }
        q.trim();
        quot = std::move(q);
        rem = BigInt(r);
        return;
    }
    divmod_knuth(num, den, quot, rem);
}

// Knuth TAOCP 4.3.1 algorithm D on 32-bit limbs.
void BigInt::divmod_knuth(const BigInt& num, const BigInt& den, BigInt& quot, BigInt& rem) {
    const size_t n = den.limbs_.size();
    const size_t m = num.limbs_.size();
    const unsigned s = std::countl_zero(den.limbs_[n - 1]);

    std::vector<uint32_t> v(n);
    for (size_t i = n; i-- > 1;)
        v[i] = (s == 0) ? den.limbs_[i]
                        : (den.limbs_[i] << s) | (den.limbs_[i - 1] >> (32 - s));
    v[0] = den.limbs_[0] << s;

    std::vector<uint32_t> u(m + 1);
    u[m] = (s == 0) ? 0 : num.limbs_[m - 1] >> (32 - s);
    for (size_t i = m; i-- > 1;)
        u[i] = (s == 0) ? num.limbs_[i]
                        : (num.limbs_[i] << s) | (num.limbs_[i - 1] >> (32 - s));
    u[0] = num.limbs_[0] << s;

    BigInt q;
    q.limbs_.assign(m - n + 1, 0);
    const uint64_t vtop = v[n - 1];
    const uint64_t vnext = v[n - 2];

    for (size_t j = m - n + 1; j-- > 0;) {
        const uint64_t numer = (static_cast<uint64_t>(u[j + n]) << 32) | u[j + n - 1];
        uint64_t qhat = numer / vtop;
        uint64_t rhat = numer % vtop;
        while (qhat >= kLimbBase ||
               qhat * vnext > ((rhat << 32) | u[j + n - 2])) {
            --qhat;
            rhat += vtop;
            if (rhat >= kLimbBase) break;
        }

        uint64_t borrow = 0;
        uint64_t carry = 0;
        for (size_t i = 0; i < n; ++i) {
            const uint64_t p = qhat * v[i] + carry;
            carry = p >> 32;
            const uint64_t t = static_cast<uint64_t>(u[i + j]) -
                               static_cast<uint32_t>(p) - borrow;
            u[i + j] = static_cast<uint32_t>(t);
            borrow = (t >> 32) & 1;
        }
        const uint64_t t = static_cast<uint64_t>(u[j + n]) - carry - borrow;
        u[j + n] = static_cast<uint32_t>(t);

        if (t >> 63) {  // qhat was one too large, add the divisor back
            --qhat;
            uint64_t c = 0;
            for (size_t i = 0; i < n; ++i) {
                const uint64_t sum = static_cast<uint64_t>(u[i + j]) + v[i] + c;
                u[i + j] = static_cast<uint32_t>(sum);
                c = sum >> 32;
            }
            u[j + n] = static_cast<uint32_t>(u[j + n] + c);
        }
        q.limbs_[j] = static_cast<uint32_t>(qhat);
    }

    BigInt r;
    r.limbs_.resize(n);
    for (size_t i = 0; i < n; ++i) {
        uint64_t x = u[i] >> s;
        if (s && i + 1 <= m) x |= static_cast<uint64_t>(u[i + 1]) << (32 - s);
        r.limbs_[i] = static_cast<uint32_t>(x);
    }
    q.trim();
    r.trim();
    quot = std::move(q);
    rem = std::move(r);
}

BigInt operator/(const BigInt& lhs, const BigInt& rhs) {
    BigInt q, r;
    BigInt::divmod(lhs, rhs, q, r);
    return q;
}

BigInt operator%(const BigInt& lhs, const BigInt& rhs) {
    BigInt q, r;
    BigInt::divmod(lhs, rhs, q, r);
    return r;
}

BigInt& BigInt::operator/=(const BigInt& rhs) {
    *this = *this / rhs;
    return *this;
}

BigInt& BigInt::operator%=(const BigInt& rhs) {
    *this = *this % rhs;
    return *this;
}

uint32_t BigInt::rem_u32(uint32_t den) const {
    if (den == 0) throw std::domain_error("BigInt: division by zero");
    uint64_t r = 0;
    for (size_t i = limbs_.size(); i-- > 0;) r = ((r << 32) | limbs_[i]) % den;
    return static_cast<uint32_t>(r);
}

BigInt BigInt::from_decimal(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("BigInt: empty decimal string");
    BigInt out;
    size_t i = 0;
    while (i < text.size()) {
        uint32_t chunk = 0;
        uint32_t scale = 1;
        for (size_t k = 0; k < 9 && i < text.size(); ++k, ++i) {
            const char c = text[i];
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw std::invalid_argument("BigInt: bad decimal digit");
            chunk = chunk * 10 + static_cast<uint32_t>(c - '0');
            scale *= 10;
        }
        out *= BigInt(scale);
        out += BigInt(chunk);
    }
    return out;
}

std::string BigInt::to_decimal() const {
    if (is_zero()) return "0";
    std::string out;
    BigInt cur = *this;
    const BigInt chunk_div(1000000000u);
    while (!cur.is_zero()) {
        BigInt q, r;
        divmod(cur, chunk_div, q, r);
        uint32_t digits = r.is_zero() ? 0 : r.limbs_[0];
        for (int k = 0; k < 9; ++k) {
            out.push_back(static_cast<char>('0' + digits % 10));
            digits /= 10;
        }
        cur = std::move(q);
    }
    while (out.size() > 1 && out.back() == '0') out.pop_back();
    std::reverse(out.begin(), out.end());
    return out;
}

BigInt BigInt::from_bytes_be(std::span<const uint8_t> bytes) {
    BigInt out;
    for (uint8_t b : bytes) {
        out <<= 8;
        out += BigInt(b);
    }
    return out;
}

std::vector<uint8_t> BigInt::to_bytes_be() const {
    std::vector<uint8_t> out;
    const size_t nbytes = (bit_length() + 7) / 8;
    out.reserve(nbytes);
    for (size_t i = nbytes; i-- > 0;) {
        const size_t limb = i / 4;
        out.push_back(static_cast<uint8_t>(limbs_[limb] >> (8 * (i % 4))));
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const BigInt& v) { return os << v.to_decimal(); }

BigInt gcd(BigInt a, BigInt b) {
    while (!b.is_zero()) {
        BigInt q, r;
        BigInt::divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

}  // namespace cubic
