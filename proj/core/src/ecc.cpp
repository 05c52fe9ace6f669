#include "hammersim/ecc.hpp"

#include <array>
#include <bit>

namespace hammersim::ecc {

namespace {

// Column of H for each of the 72 codeword bits. Data bits use distinct
// odd-weight bytes (56 of weight 3, then 8 of weight 5); check bit i uses
// the unit vector 1<<i. Odd columns make every double error produce an
// even, nonzero syndrome, which is what gives SECDED its detection
// guarantee.
struct Tables {
    std::array<uint8_t, 72> column{};
    std::array<uint64_t, 8> data_mask{}; // data bits feeding each check bit
    std::array<int8_t, 256> bit_of_syndrome{}; // -1 when no column matches

    Tables() {
        int n = 0;
        for (int w : {3, 5}) {
            for (int pattern = 0; pattern < 256 && n < 64; ++pattern) {
                if (std::popcount(unsigned(pattern)) == w) column[n++] = uint8_t(pattern);
            }
        }
        for (int i = 0; i < 8; ++i) column[64 + i] = uint8_t(1u << i);

        for (int j = 0; j < 64; ++j)
            for (int i = 0; i < 8; ++i)
                if (column[j] & (1u << i)) data_mask[i] |= 1ull << j;

        bit_of_syndrome.fill(-1);
        for (int j = 0; j < 72; ++j) bit_of_syndrome[column[j]] = int8_t(j);
    }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

} // namespace

Codeword72 encode(uint64_t data) {
    const Tables& t = tables();
    uint8_t check = 0;
    for (int i = 0; i < 8; ++i)
        check |= uint8_t((std::popcount(data & t.data_mask[i]) & 1) << i);
    return {data, check};
}

uint8_t syndrome(const Codeword72& cw) {
    return uint8_t(encode(cw.data).check ^ cw.check);
}

Codeword72 flip_bit(Codeword72 cw, uint32_t position) {
    if (position < 64)
        cw.data ^= 1ull << position;
    else
        cw.check ^= uint8_t(1u << (position - 64));
    return cw;
}

std::pair<uint64_t, DecodeStatus> decode(const Codeword72& cw) {
    uint8_t s = syndrome(cw);
    if (s == 0) return {cw.data, {DecodeKind::Clean, 0}};
    if (std::popcount(unsigned(s)) % 2 == 1) {
        int8_t bit = tables().bit_of_syndrome[s];
        if (bit >= 0) {
            Codeword72 fixed = flip_bit(cw, uint32_t(bit));
            return {fixed.data, {DecodeKind::Corrected, uint32_t(bit)}};
        }
    }
    return {cw.data, {DecodeKind::DetectedUncorrectable, 0}};
}

} // namespace hammersim::ecc
