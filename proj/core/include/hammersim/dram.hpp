#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hammersim/fault_model.hpp"
#include "hammersim/types.hpp"

namespace hammersim {

constexpr uint32_t kUnmappedRow = UINT32_MAX;

/// Per-bank logical->physical row mapping. Logical rows [0, rows) map
/// injectively into physical rows [0, rows + spares); spare physical rows
/// start out unmapped. Physical neighbors of physical index r are r-1 and r+1.
class AdjacencyMap {
public:
    AdjacencyMap() = default;
    AdjacencyMap(uint32_t banks, uint32_t rows, uint32_t spares); // identity

    static AdjacencyMap identity(uint32_t banks, uint32_t rows, uint32_t spares);
    static AdjacencyMap seeded_permutation(uint32_t banks, uint32_t rows, uint32_t spares,
                                           uint64_t seed);
    /// Builds from an explicit per-bank logical->physical table. Throws
    /// AddressError on duplicates or out-of-range physical indices.
    static AdjacencyMap from_mapping(uint32_t banks, uint32_t rows, uint32_t phys_rows,
                                     const std::vector<std::vector<uint32_t>>& l2p);

    uint32_t banks() const { return banks_; }
    uint32_t rows() const { return rows_; }
    uint32_t physical_rows() const { return phys_rows_; }

    uint32_t physical_of(uint32_t bank, uint32_t row) const { return l2p_[bank][row]; }
    /// kUnmappedRow when no logical row maps there
    uint32_t logical_of(uint32_t bank, uint32_t phys_row) const { return p2l_[bank][phys_row]; }

    /// Logical addresses of the rows physically adjacent to addr (length 1 or 2).
    std::vector<RowAddress> neighbors(RowAddress addr) const;
    /// Physical indices adjacent to phys_row within this bank (length 1 or 2).
    std::vector<uint32_t> physical_neighbors_of(uint32_t phys_row) const;
    uint32_t physical_neighbors_of(uint32_t phys_row, uint32_t out[2]) const {
        uint32_t n = 0;
        if (phys_row > 0) out[n++] = phys_row - 1;
        if (phys_row + 1 < phys_rows_) out[n++] = phys_row + 1;
        return n;
    }

    void remap(uint32_t bank, uint32_t row, uint32_t new_phys_row);

    bool operator==(const AdjacencyMap&) const = default;

private:
    uint32_t banks_ = 0;
    uint32_t rows_ = 0;
    uint32_t phys_rows_ = 0;
    std::vector<std::vector<uint32_t>> l2p_;
    std::vector<std::vector<uint32_t>> p2l_;
};

/// SPD-style adjacency record: line-oriented text, bit-exact round trip.
struct SpdRecord {
    std::string text;
};

SpdRecord export_adjacency(const AdjacencyMap& map);
AdjacencyMap import_adjacency(const SpdRecord& record);

enum class FillPattern : uint8_t { Zeros, Ones, Checkerboard };

struct DeviceConfig {
    FillPattern fill = FillPattern::Ones;
    bool random_adjacency = false;
    bool ecc = false; // store rows as 72-bit codewords (64 data + 8 check per slot)
};

struct RetireRecord {
    RowAddress addr{};
    uint32_t old_phys = 0;
    uint32_t new_phys = 0;
};

/// Geometry, row storage, per-cell vulnerability profiles, adjacency, and
/// hammer exposure for one module. Purely passive; the controller drives it.
class DramDevice {
public:
    DramDevice(const Geometry& geom, const TimingParams& timing, const FaultModelParams& fault,
               uint64_t seed, const DeviceConfig& cfg = {});

    const Geometry& geometry() const { return geom_; }
    const TimingParams& timing() const { return timing_; }
    const FaultModelParams& fault_params() const { return fault_; }
    const AdjacencyMap& adjacency() const { return adj_; }
    bool ecc_enabled() const { return cfg_.ecc; }
    uint32_t cells_per_row() const { return cells_per_row_; }

    void check_address(RowAddress addr) const;

    std::vector<RowAddress> physical_neighbors(RowAddress addr) const;

    uint64_t read_word(RowAddress addr, uint32_t word_index) const;
    void write_word(RowAddress addr, uint32_t word_index, uint64_t data);
    uint8_t read_check_byte(RowAddress addr, uint32_t word_index) const;
    void write_check_byte(RowAddress addr, uint32_t word_index, uint8_t check);

    /// Bumps the exposure of the aggressor's physical neighbors; the
    /// aggressor itself is untouched. Fills out[0..1] with the victim
    /// physical rows and returns their count (allocation-free hot path).
    uint32_t record_aggressor_activation(RowAddress aggressor, uint32_t out[2]);
    std::vector<uint32_t> record_aggressor_activation(RowAddress aggressor);

    /// Flips every not-yet-flipped vulnerable cell in the given physical rows
    /// whose exposure has reached its threshold and whose stored bit still
    /// holds the charged value. Appends the new flips (logical addresses;
    /// flips in unmapped physical rows are not reported).
    void materialize_flips(uint32_t bank, const uint32_t* phys_rows, uint32_t count,
                           uint64_t now_ns, std::vector<FlipRecord>& out);
    std::vector<FlipRecord> materialize_flips(uint32_t bank, const std::vector<uint32_t>& phys_rows,
                                              uint64_t now_ns);

    /// Refresh semantics for one physical row: exposure back to zero, flip
    /// flags cleared, stored contents (corrupted or not) preserved.
    void reset_exposure(uint32_t bank, uint32_t phys_row);
    void reset_exposure(RowAddress addr);

    uint64_t exposure(RowAddress addr) const;
    uint64_t exposure_physical(uint32_t bank, uint32_t phys_row) const;

    const CellProfileTable& profiles() const { return profiles_; }
    CellProfileTable& profiles_mut() { return profiles_; }

    /// Remaps each listed logical row to a fresh spare physical row (all
    /// cells invulnerable), migrating stored data.
    std::vector<RetireRecord> retire_rows(const std::vector<RowAddress>& rows);

    void import_adjacency_map(const AdjacencyMap& map);

    bool operator==(const DramDevice& other) const;

private:
    size_t slot_index(uint32_t bank, uint32_t phys_row, uint32_t word_index) const;
    uint8_t get_cell(uint32_t bank, uint32_t phys_row, uint32_t cell) const;
    void set_cell(uint32_t bank, uint32_t phys_row, uint32_t cell, uint8_t v);
    uint64_t fill_word(uint32_t word_index) const;

    Geometry geom_;
    TimingParams timing_;
    FaultModelParams fault_;
    DeviceConfig cfg_;
    uint32_t cells_per_row_ = 0;
    AdjacencyMap adj_;
    std::vector<uint64_t> data_;   // banks * phys_rows * words_per_row
    std::vector<uint8_t> check_;   // same shape, ECC mode only
    CellProfileTable profiles_;
    ExposureTable exposure_;
    std::vector<uint32_t> next_spare_; // per bank, next unused spare physical index
};

} // namespace hammersim
