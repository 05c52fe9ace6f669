#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "hammersim/types.hpp"

namespace hammersim {

enum class OrientationPolicy : uint8_t {
    AllTrue,               // every cell's charged value is 1
    AlternateByPhysicalRow, // even physical rows true-cell, odd anti-cell
    SeededRandom,
};

struct FaultModelParams {
    double vulnerable_fraction = 1e-5;
    uint64_t threshold_min = 50000;
    uint64_t threshold_max = 200000;
    OrientationPolicy orientation = OrientationPolicy::AllTrue;

    void validate() const {
        if (vulnerable_fraction < 0.0 || vulnerable_fraction > 1.0)
            throw ConfigError("fault: vulnerable_fraction must be in [0,1]");
        if (threshold_min < 1 || threshold_min > threshold_max)
            throw ConfigError("fault: need 1 <= threshold_min <= threshold_max");
    }
};

constexpr uint64_t kInfiniteThreshold = std::numeric_limits<uint64_t>::max();

/// One vulnerable cell in a physical row. Cells with infinite threshold are
/// simply absent from the table.
struct VulnerableCell {
    uint32_t cell = 0;       // cell index within the row
    uint64_t threshold = 0;  // finite N_th
    uint8_t charged = 1;     // the charged value (1 for true-cell, 0 for anti-cell)
    bool flipped = false;    // already flipped this refresh epoch
};

/// Vulnerable cells, keyed by (bank, physical row). Only spans the
/// non-spare physical rows; spares are invulnerable by construction.
struct CellProfileTable {
    uint32_t banks = 0;
    uint32_t phys_rows = 0;
    uint32_t cells_per_row = 0;
    std::vector<std::vector<VulnerableCell>> rows; // banks * phys_rows

    std::vector<VulnerableCell>& at(uint32_t bank, uint32_t phys_row) {
        return rows[size_t(bank) * phys_rows + phys_row];
    }
    const std::vector<VulnerableCell>& at(uint32_t bank, uint32_t phys_row) const {
        return rows[size_t(bank) * phys_rows + phys_row];
    }

    size_t vulnerable_count() const {
        size_t n = 0;
        for (const auto& r : rows) n += r.size();
        return n;
    }
};

/// Deterministically samples per-cell thresholds and orientations.
/// cells_per_row is 64 or 72 cells per word slot depending on ECC mode.
CellProfileTable sample_profiles(const Geometry& geom, const FaultModelParams& params,
                                 uint32_t cells_per_row, uint64_t seed);

/// Per-physical-row count of neighbor activations since the row's last refresh.
class ExposureTable {
public:
    ExposureTable() = default;
    ExposureTable(uint32_t banks, uint32_t phys_rows)
        : phys_rows_(phys_rows), counts_(size_t(banks) * phys_rows, 0) {}

    uint64_t get(uint32_t bank, uint32_t phys_row) const {
        return counts_[size_t(bank) * phys_rows_ + phys_row];
    }
    void increment(uint32_t bank, uint32_t phys_row) {
        ++counts_[size_t(bank) * phys_rows_ + phys_row];
    }
    void reset(uint32_t bank, uint32_t phys_row) {
        counts_[size_t(bank) * phys_rows_ + phys_row] = 0;
    }

private:
    uint32_t phys_rows_ = 0;
    std::vector<uint64_t> counts_;
};

} // namespace hammersim
