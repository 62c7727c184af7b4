#include "cubic/rank_coding.hpp"

#include "cubic/errors.hpp"

namespace cubic {

BigInt encode_rank3(const BigInt& c, uint32_t rank) {
    switch (rank) {
        case 1: return c << 1;
        case 2: return (c << 2) + BigInt(1);
        case 3: return (c << 2) + BigInt(3);
        default: throw Error(Errc::BadRank, "rank " + std::to_string(rank) + " not in {1,2,3}");
    }
}

std::pair<BigInt, uint32_t> decode_rank3(const BigInt& v) {
    if (!v.bit(0)) return {v >> 1, 1};
    return {v >> 2, v.bit(1) ? 3u : 2u};
}

BigInt encode_rank4(const BigInt& c, uint32_t rank) {
    if (rank < 1 || rank > 4)
        throw Error(Errc::BadRank, "rank " + std::to_string(rank) + " not in {1,2,3,4}");
    return (c << 2) + BigInt(rank - 1);
}

std::pair<BigInt, uint32_t> decode_rank4(const BigInt& v) {
    const uint32_t low = (v.bit(1) ? 2u : 0u) | (v.bit(0) ? 1u : 0u);
    return {v >> 2, low + 1};
}

}  // namespace cubic
