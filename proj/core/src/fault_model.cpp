#include "hammersim/fault_model.hpp"

#include <random>

namespace hammersim {

namespace {

inline double unit_double(uint64_t bits) {
    return double(bits >> 11) * 0x1.0p-53;
}

} // namespace

CellProfileTable sample_profiles(const Geometry& geom, const FaultModelParams& params,
                                 uint32_t cells_per_row, uint64_t seed) {
    params.validate();
    CellProfileTable table;
    table.banks = geom.banks;
    table.phys_rows = geom.physical_rows_per_bank();
    table.cells_per_row = cells_per_row;
    table.rows.assign(size_t(table.banks) * table.phys_rows, {});

    std::mt19937_64 rng(mix64(seed));
    uint64_t span = params.threshold_max - params.threshold_min + 1;

    for (uint32_t b = 0; b < geom.banks; ++b) {
        // spare rows (physical index >= rows_per_bank) are invulnerable
        for (uint32_t p = 0; p < geom.rows_per_bank; ++p) {
            auto& row = table.at(b, p);
            for (uint32_t c = 0; c < cells_per_row; ++c) {
                if (unit_double(rng()) >= params.vulnerable_fraction) continue;
                uint64_t threshold = params.threshold_min + rng() % span;
                uint8_t charged = 1;
                switch (params.orientation) {
                    case OrientationPolicy::AllTrue: charged = 1; break;
                    case OrientationPolicy::AlternateByPhysicalRow: charged = (p % 2 == 0); break;
                    case OrientationPolicy::SeededRandom: charged = uint8_t(rng() & 1); break;
                }
                row.push_back({c, threshold, charged, false});
            }
        }
    }
    return table;
}

} // namespace hammersim
