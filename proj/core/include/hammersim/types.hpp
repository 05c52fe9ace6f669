#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hammersim {

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GeometryError : SimError {
    using SimError::SimError;
};
struct AddressError : SimError {
    using SimError::SimError;
};
struct BankAlreadyOpen : SimError {
    using SimError::SimError;
};
struct RowNotOpen : SimError {
    using SimError::SimError;
};
struct SpdFormatError : SimError {
    using SimError::SimError;
};
struct TraceFormatError : SimError {
    using SimError::SimError;
};
struct SparesExhausted : SimError {
    using SimError::SimError;
};
struct EdgeVictim : SimError {
    using SimError::SimError;
};
struct ConfigError : SimError {
    using SimError::SimError;
};

/// DRAM organization. Spare rows are physical rows beyond the logical
/// address space, reserved as retirement targets.
struct Geometry {
    uint32_t banks = 1;
    uint32_t rows_per_bank = 8;
    uint32_t bits_per_row = 64;       // data bits; must be a multiple of 64
    uint32_t spare_rows_per_bank = 0; // retirement pool

    uint32_t words_per_row() const { return bits_per_row / 64; }
    uint32_t physical_rows_per_bank() const { return rows_per_bank + spare_rows_per_bank; }

    void validate() const {
        if (banks < 1) throw GeometryError("geometry: banks must be >= 1");
        if (rows_per_bank < 1) throw GeometryError("geometry: rows_per_bank must be >= 1");
        if (bits_per_row < 64 || bits_per_row % 64 != 0)
            throw GeometryError("geometry: bits_per_row must be a positive multiple of 64");
        if (spare_rows_per_bank >= rows_per_bank)
            throw GeometryError("geometry: spare_rows_per_bank must be < rows_per_bank");
    }
};

struct RowAddress {
    uint32_t bank = 0;
    uint32_t row = 0; // logical row index

    bool operator==(const RowAddress&) const = default;
    auto operator<=>(const RowAddress&) const = default;
};

struct TimingParams {
    uint64_t trc_ns = 50;        // one activate-precharge cycle
    uint64_t trfc_row_ns = 100;  // one row refresh
    double refresh_window_ms = 64.0; // every row refreshed once per window at 1x

    double refresh_window_ns() const { return refresh_window_ms * 1e6; }

    void validate() const {
        if (trc_ns == 0 || trfc_row_ns == 0 || refresh_window_ms <= 0)
            throw ConfigError("timing: all parameters must be strictly positive");
    }
};

enum class CommandKind : uint8_t { Act, Pre, Rd, Wr, RefRow, Nop };

struct DramCommand {
    CommandKind kind = CommandKind::Nop;
    RowAddress addr{};        // Act, Rd, Wr, RefRow
    uint32_t word_index = 0;  // Rd, Wr
    uint64_t data = 0;        // Wr
    uint64_t duration_ns = 0; // Nop

    static DramCommand act(RowAddress a) { return {CommandKind::Act, a, 0, 0, 0}; }
    static DramCommand pre(uint32_t bank) { return {CommandKind::Pre, {bank, 0}, 0, 0, 0}; }
    static DramCommand rd(RowAddress a, uint32_t w) { return {CommandKind::Rd, a, w, 0, 0}; }
    static DramCommand wr(RowAddress a, uint32_t w, uint64_t d) { return {CommandKind::Wr, a, w, d, 0}; }
    static DramCommand ref_row(RowAddress a) { return {CommandKind::RefRow, a, 0, 0, 0}; }
    static DramCommand nop(uint64_t ns) { return {CommandKind::Nop, {0, 0}, 0, 0, ns}; }

    bool operator==(const DramCommand&) const = default;
};

struct FlipRecord {
    uint64_t time_ns = 0;
    RowAddress addr{};   // logical victim address
    uint32_t bit = 0;    // cell index within the row
    uint8_t old_bit = 0;
    uint8_t new_bit = 0;

    bool operator==(const FlipRecord&) const = default;
};

// splitmix64; used everywhere a derived seed is needed
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
    return mix64(seed ^ mix64(index + 1));
}

} // namespace hammersim
