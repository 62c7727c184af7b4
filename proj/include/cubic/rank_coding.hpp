#pragma once

#include <cstdint>
#include <utility>

#include "cubic/bigint.hpp"

namespace cubic {

// Rank framing for the three-root cipher: the ciphertext bits get a short
// rank code appended at the low end, decoded LSB-first. Codes: rank 1 ->
// "0", rank 2 -> "01", rank 3 -> "11", i.e. 2c, 4c+1, 4c+3. The code is
// prefix-free when read from the least significant bit.
BigInt encode_rank3(const BigInt& c, uint32_t rank);
std::pair<BigInt, uint32_t> decode_rank3(const BigInt& v);

// Fixed two-bit variant for four-root (square) transformations:
// v = 4c + (rank - 1).
BigInt encode_rank4(const BigInt& c, uint32_t rank);
std::pair<BigInt, uint32_t> decode_rank4(const BigInt& v);

}  // namespace cubic
