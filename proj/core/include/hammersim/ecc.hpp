#pragma once

#include <cstdint>
#include <utility>

namespace hammersim::ecc {

/// SECDED(72,64) codeword: 64 data bits plus 8 check bits. Bit positions
/// 0..63 address the data word, 64..71 the check byte.
struct Codeword72 {
    uint64_t data = 0;
    uint8_t check = 0;

    bool operator==(const Codeword72&) const = default;
};

enum class DecodeKind : uint8_t { Clean, Corrected, DetectedUncorrectable };

struct DecodeStatus {
    DecodeKind kind = DecodeKind::Clean;
    uint32_t bit_position = 0; // valid when kind == Corrected

    bool operator==(const DecodeStatus&) const = default;
};

/// Systematic Hsiao encoding (odd-weight-column H matrix).
Codeword72 encode(uint64_t data);

uint8_t syndrome(const Codeword72& cw);

/// Zero syndrome -> Clean; odd-weight syndrome matching a column -> the
/// offending bit is corrected and the original data returned; anything
/// else -> DetectedUncorrectable (data field not trustworthy).
std::pair<uint64_t, DecodeStatus> decode(const Codeword72& cw);

Codeword72 flip_bit(Codeword72 cw, uint32_t position);

} // namespace hammersim::ecc
