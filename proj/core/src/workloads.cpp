#include "hammersim/workloads.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace hammersim {

std::string workload_name(WorkloadKind kind) {
    switch (kind) {
        case WorkloadKind::SingleSided: return "single_sided";
        case WorkloadKind::DoubleSided: return "double_sided";
        case WorkloadKind::UniformRandom: return "uniform_random";
        case WorkloadKind::BenignSequential: return "benign_sequential";
    }
    return "?";
}

AccessTrace gen_single_sided(const Geometry& geom, RowAddress aggressor, uint64_t n, AccessOp op,
                             uint64_t write_value) {
    if (aggressor.bank >= geom.banks || aggressor.row >= geom.rows_per_bank)
        throw AddressError("single_sided: aggressor out of range");
    AccessTrace trace{"single_sided", 0, {}};
    trace.commands.reserve(n * 3);
    for (uint64_t i = 0; i < n; ++i) {
        trace.commands.push_back(DramCommand::act(aggressor));
        trace.commands.push_back(op == AccessOp::Read
                                     ? DramCommand::rd(aggressor, 0)
                                     : DramCommand::wr(aggressor, 0, write_value));
        trace.commands.push_back(DramCommand::pre(aggressor.bank));
    }
    return trace;
}

AccessTrace gen_double_sided(const DramDevice& device, RowAddress victim, uint64_t n_per_side) {
    std::vector<RowAddress> aggressors = device.physical_neighbors(victim);
    if (aggressors.size() < 2)
        throw EdgeVictim("double_sided: victim row " + std::to_string(victim.row) +
                         " has only one physical neighbor");
    AccessTrace trace{"double_sided", 0, {}};
    trace.commands.reserve(n_per_side * 4);
    for (uint64_t i = 0; i < n_per_side; ++i) {
        for (const RowAddress& a : aggressors) {
            trace.commands.push_back(DramCommand::act(a));
            trace.commands.push_back(DramCommand::pre(a.bank));
        }
    }
    return trace;
}

AccessTrace gen_uniform_random(const Geometry& geom, uint64_t seed, uint64_t n,
                               double write_fraction, uint64_t write_value) {
    std::mt19937_64 rng(mix64(seed));
    AccessTrace trace{"uniform_random", seed, {}};
    trace.commands.reserve(n * 3);
    for (uint64_t i = 0; i < n; ++i) {
        RowAddress addr{uint32_t(rng() % geom.banks), uint32_t(rng() % geom.rows_per_bank)};
        // the draw happens unconditionally so the row sequence is identical
        // across write_fraction values under the same seed
        bool write = double(rng() >> 11) * 0x1.0p-53 < write_fraction;
        trace.commands.push_back(DramCommand::act(addr));
        trace.commands.push_back(write ? DramCommand::wr(addr, 0, write_value)
                                       : DramCommand::rd(addr, 0));
        trace.commands.push_back(DramCommand::pre(addr.bank));
    }
    return trace;
}

AccessTrace gen_benign_sequential(const Geometry& geom, uint64_t n) {
    AccessTrace trace{"benign_sequential", 0, {}};
    trace.commands.reserve(n * 3);
    for (uint64_t i = 0; i < n; ++i) {
        RowAddress addr{uint32_t((i / geom.rows_per_bank) % geom.banks),
                        uint32_t(i % geom.rows_per_bank)};
        trace.commands.push_back(DramCommand::act(addr));
        trace.commands.push_back(DramCommand::rd(addr, 0));
        trace.commands.push_back(DramCommand::pre(addr.bank));
    }
    return trace;
}

AccessTrace generate(const DramDevice& device, const WorkloadSpec& spec, uint64_t seed) {
    switch (spec.kind) {
        case WorkloadKind::SingleSided:
            return gen_single_sided(device.geometry(), spec.aggressor, spec.count, spec.op,
                                    spec.write_value);
        case WorkloadKind::DoubleSided:
            return gen_double_sided(device, spec.victim, spec.count);
        case WorkloadKind::UniformRandom:
            return gen_uniform_random(device.geometry(), seed, spec.count,
                                      spec.op == AccessOp::Write ? 1.0 : 0.0, spec.write_value);
        case WorkloadKind::BenignSequential:
            return gen_benign_sequential(device.geometry(), spec.count);
    }
    throw ConfigError("workload: unknown kind");
}

void write_trace(const AccessTrace& trace, std::ostream& out) {
    out << "trace v1\n";
    char hexbuf[17];
    for (const DramCommand& c : trace.commands) {
        switch (c.kind) {
            case CommandKind::Act: out << "ACT " << c.addr.bank << ' ' << c.addr.row << "\n"; break;
            case CommandKind::Pre: out << "PRE " << c.addr.bank << "\n"; break;
            case CommandKind::Rd:
                out << "RD " << c.addr.bank << ' ' << c.addr.row << ' ' << c.word_index << "\n";
                break;
            case CommandKind::Wr:
                std::snprintf(hexbuf, sizeof hexbuf, "%016llx", (unsigned long long)c.data);
                out << "WR " << c.addr.bank << ' ' << c.addr.row << ' ' << c.word_index << ' '
                    << hexbuf << "\n";
                break;
            case CommandKind::RefRow:
                out << "REF " << c.addr.bank << ' ' << c.addr.row << "\n";
                break;
            case CommandKind::Nop: out << "NOP " << c.duration_ns << "\n"; break;
        }
    }
}

void write_trace(const AccessTrace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SimError("cannot open trace file for writing: " + path);
    write_trace(trace, out);
}

AccessTrace read_trace(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "trace v1")
        throw TraceFormatError("trace: missing 'trace v1' header");
    AccessTrace trace{"file", 0, {}};
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string op;
        ls >> op;
        DramCommand cmd;
        auto fail = [&](const char* what) {
            throw TraceFormatError("trace line " + std::to_string(lineno) + ": " + what);
        };
        if (op == "ACT") {
            if (!(ls >> cmd.addr.bank >> cmd.addr.row)) fail("malformed ACT");
            cmd.kind = CommandKind::Act;
        } else if (op == "PRE") {
            if (!(ls >> cmd.addr.bank)) fail("malformed PRE");
            cmd.kind = CommandKind::Pre;
        } else if (op == "RD") {
            if (!(ls >> cmd.addr.bank >> cmd.addr.row >> cmd.word_index)) fail("malformed RD");
            cmd.kind = CommandKind::Rd;
        } else if (op == "WR") {
            std::string hex;
            if (!(ls >> cmd.addr.bank >> cmd.addr.row >> cmd.word_index >> hex))
                fail("malformed WR");
            try {
                size_t pos = 0;
                cmd.data = std::stoull(hex, &pos, 16);
                if (pos != hex.size()) fail("bad hex payload");
            } catch (const std::exception&) {
                fail("bad hex payload");
            }
            cmd.kind = CommandKind::Wr;
        } else if (op == "REF") {
            if (!(ls >> cmd.addr.bank >> cmd.addr.row)) fail("malformed REF");
            cmd.kind = CommandKind::RefRow;
        } else if (op == "NOP") {
            if (!(ls >> cmd.duration_ns)) fail("malformed NOP");
            cmd.kind = CommandKind::Nop;
        } else {
            fail("unknown command");
        }
        std::string extra;
        if (ls >> extra) fail("trailing tokens");
        trace.commands.push_back(cmd);
    }
    return trace;
}

AccessTrace read_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TraceFormatError("cannot open trace file: " + path);
    return read_trace(in);
}

} // namespace hammersim
