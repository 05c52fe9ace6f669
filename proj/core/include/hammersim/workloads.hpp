#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hammersim/dram.hpp"
#include "hammersim/types.hpp"

namespace hammersim {

enum class WorkloadKind : uint8_t {
    SingleSided,
    DoubleSided,
    UniformRandom,
    BenignSequential,
};

enum class AccessOp : uint8_t { Read, Write };

struct WorkloadSpec {
    WorkloadKind kind = WorkloadKind::SingleSided;
    RowAddress aggressor{};   // single_sided
    RowAddress victim{};      // double_sided
    uint64_t count = 0;       // iterations (per side for double_sided)
    AccessOp op = AccessOp::Read;
    uint64_t write_value = ~0ull; // payload for the write variant
};

struct AccessTrace {
    std::string generator;
    uint64_t seed = 0;
    std::vector<DramCommand> commands;

    bool operator==(const AccessTrace&) const = default;
};

/// n repetitions of ACT aggressor; RD (or WR) word 0; PRE.
AccessTrace gen_single_sided(const Geometry& geom, RowAddress aggressor, uint64_t n,
                             AccessOp op = AccessOp::Read, uint64_t write_value = ~0ull);

/// Alternating ACT/PRE of the victim's two physical neighbors, n per side.
/// Throws EdgeVictim when the victim sits at a physical edge.
AccessTrace gen_double_sided(const DramDevice& device, RowAddress victim, uint64_t n_per_side);

/// n ACT / RD-or-WR / PRE triples at uniform random (bank, row).
AccessTrace gen_uniform_random(const Geometry& geom, uint64_t seed, uint64_t n,
                               double write_fraction = 0.0, uint64_t write_value = ~0ull);

/// Sequential sweep: ACT/RD/PRE over rows in order, n commands triples total.
AccessTrace gen_benign_sequential(const Geometry& geom, uint64_t n);

AccessTrace generate(const DramDevice& device, const WorkloadSpec& spec, uint64_t seed);

std::string workload_name(WorkloadKind kind);

void write_trace(const AccessTrace& trace, std::ostream& out);
void write_trace(const AccessTrace& trace, const std::string& path);
AccessTrace read_trace(std::istream& in);
AccessTrace read_trace(const std::string& path);

} // namespace hammersim
