// Test-only brute-force oracle: recounts hammer exposure from a controller
// event log with naive bookkeeping and predicts the flip set independently
// of the device's materialization path. Assumes traces never overwrite a
// charged cell with a different value (RD-only, or WR of the fill pattern).
#pragma once

#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "hammersim/controller.hpp"
#include "hammersim/dram.hpp"

namespace hammersim::testing {

using PhysicalCell = std::tuple<uint32_t, uint32_t, uint32_t>; // bank, phys_row, cell

inline uint8_t fill_bit(FillPattern fill, uint32_t word_index, uint32_t bit_in_word) {
    switch (fill) {
        case FillPattern::Zeros: return 0;
        case FillPattern::Ones: return 1;
        case FillPattern::Checkerboard: {
            uint64_t w = (word_index % 2 == 0) ? 0xAAAAAAAAAAAAAAAAull : 0x5555555555555555ull;
            return uint8_t((w >> bit_in_word) & 1);
        }
    }
    return 0;
}

/// Replays the event log counting exposures per physical row; a vulnerable
/// cell is predicted to flip the moment its row's exposure reaches its
/// threshold, once, provided it initially stores its charged value.
inline std::set<PhysicalCell> brute_force_flip_set(const DramDevice& device,
                                                   const std::vector<SimEvent>& events,
                                                   FillPattern fill) {
    const CellProfileTable& profiles = device.profiles();
    uint32_t phys_rows = profiles.phys_rows;
    uint32_t cells_per_word = device.ecc_enabled() ? 72u : 64u;

    std::map<std::pair<uint32_t, uint32_t>, uint64_t> exposure;
    std::set<PhysicalCell> flipped;

    auto check_row = [&](uint32_t bank, uint32_t row) {
        uint64_t exp = exposure[{bank, row}];
        for (const VulnerableCell& cell : profiles.at(bank, row)) {
            if (exp < cell.threshold) continue;
            PhysicalCell key{bank, row, cell.cell};
            if (flipped.count(key)) continue;
            uint32_t word = cell.cell / cells_per_word;
            uint32_t bit = cell.cell % cells_per_word;
            uint8_t stored = bit < 64 ? fill_bit(fill, word, bit)
                                      : 0 /* check bits handled by callers that use them */;
            if (bit >= 64) continue; // ECC check-bit cells not modeled by this oracle
            if (stored != cell.charged) continue;
            flipped.insert(key);
        }
    };

    for (const SimEvent& ev : events) {
        if (ev.kind == SimEvent::Kind::Act) {
            if (ev.phys_row > 0) {
                ++exposure[{ev.bank, ev.phys_row - 1}];
                check_row(ev.bank, ev.phys_row - 1);
            }
            if (ev.phys_row + 1 < phys_rows) {
                ++exposure[{ev.bank, ev.phys_row + 1}];
                check_row(ev.bank, ev.phys_row + 1);
            }
        } else {
            exposure[{ev.bank, ev.phys_row}] = 0;
        }
    }
    return flipped;
}

/// Simulator flip log converted to physical coordinates for comparison.
inline std::set<PhysicalCell> physical_flip_set(const DramDevice& device,
                                                const std::vector<FlipRecord>& flips) {
    std::set<PhysicalCell> out;
    for (const FlipRecord& f : flips)
        out.insert({f.addr.bank, device.adjacency().physical_of(f.addr.bank, f.addr.row), f.bit});
    return out;
}

} // namespace hammersim::testing
