#include "hammersim/dram.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace hammersim {

AdjacencyMap::AdjacencyMap(uint32_t banks, uint32_t rows, uint32_t spares)
    : banks_(banks), rows_(rows), phys_rows_(rows + spares) {
    l2p_.assign(banks, std::vector<uint32_t>(rows));
    p2l_.assign(banks, std::vector<uint32_t>(phys_rows_, kUnmappedRow));
    for (uint32_t b = 0; b < banks; ++b) {
        for (uint32_t r = 0; r < rows; ++r) {
            l2p_[b][r] = r;
            p2l_[b][r] = r;
        }
    }
}

AdjacencyMap AdjacencyMap::identity(uint32_t banks, uint32_t rows, uint32_t spares) {
    return AdjacencyMap(banks, rows, spares);
}

AdjacencyMap AdjacencyMap::seeded_permutation(uint32_t banks, uint32_t rows, uint32_t spares,
                                              uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<uint32_t>> l2p(banks, std::vector<uint32_t>(rows));
    for (uint32_t b = 0; b < banks; ++b) {
        std::iota(l2p[b].begin(), l2p[b].end(), 0u);
        // Fisher-Yates; spare physical rows stay unmapped
        for (uint32_t i = rows; i > 1; --i) {
            uint32_t j = uint32_t(rng() % i);
            std::swap(l2p[b][i - 1], l2p[b][j]);
        }
    }
    return from_mapping(banks, rows, rows + spares, l2p);
}

AdjacencyMap AdjacencyMap::from_mapping(uint32_t banks, uint32_t rows, uint32_t phys_rows,
                                        const std::vector<std::vector<uint32_t>>& l2p) {
    AdjacencyMap map;
    map.banks_ = banks;
    map.rows_ = rows;
    map.phys_rows_ = phys_rows;
    map.l2p_ = l2p;
    map.p2l_.assign(banks, std::vector<uint32_t>(phys_rows, kUnmappedRow));
    for (uint32_t b = 0; b < banks; ++b) {
        if (l2p[b].size() != rows) throw AddressError("adjacency: wrong row count");
        for (uint32_t r = 0; r < rows; ++r) {
            uint32_t p = l2p[b][r];
            if (p >= phys_rows) throw AddressError("adjacency: physical index out of range");
            if (map.p2l_[b][p] != kUnmappedRow)
                throw AddressError("adjacency: duplicate physical index");
            map.p2l_[b][p] = r;
        }
    }
    return map;
}

std::vector<uint32_t> AdjacencyMap::physical_neighbors_of(uint32_t phys_row) const {
    std::vector<uint32_t> out;
    if (phys_row > 0) out.push_back(phys_row - 1);
    if (phys_row + 1 < phys_rows_) out.push_back(phys_row + 1);
    return out;
}

std::vector<RowAddress> AdjacencyMap::neighbors(RowAddress addr) const {
    if (addr.bank >= banks_ || addr.row >= rows_)
        throw AddressError("neighbors: address out of range");
    std::vector<RowAddress> out;
    for (uint32_t p : physical_neighbors_of(l2p_[addr.bank][addr.row])) {
        uint32_t logical = p2l_[addr.bank][p];
        if (logical != kUnmappedRow) out.push_back({addr.bank, logical});
    }
    return out;
}

void AdjacencyMap::remap(uint32_t bank, uint32_t row, uint32_t new_phys_row) {
    if (bank >= banks_ || row >= rows_ || new_phys_row >= phys_rows_)
        throw AddressError("remap: address out of range");
    if (p2l_[bank][new_phys_row] != kUnmappedRow)
        throw AddressError("remap: target physical row already mapped");
    uint32_t old_phys = l2p_[bank][row];
    p2l_[bank][old_phys] = kUnmappedRow;
    l2p_[bank][row] = new_phys_row;
    p2l_[bank][new_phys_row] = row;
}

SpdRecord export_adjacency(const AdjacencyMap& map) {
    std::ostringstream out;
    out << "spd v1 banks=" << map.banks() << " rows=" << map.rows() << "\n";
    for (uint32_t b = 0; b < map.banks(); ++b) {
        out << "bank " << b << ":";
        for (uint32_t r = 0; r < map.rows(); ++r) out << ' ' << map.physical_of(b, r);
        out << "\n";
    }
    return SpdRecord{out.str()};
}

namespace {

uint32_t parse_field(const std::string& tok, const char* prefix) {
    std::string p(prefix);
    if (tok.rfind(p, 0) != 0) throw SpdFormatError("spd: expected " + p + "<n>, got '" + tok + "'");
    try {
        size_t pos = 0;
        unsigned long v = std::stoul(tok.substr(p.size()), &pos);
        if (pos != tok.size() - p.size()) throw std::invalid_argument("trailing");
        return uint32_t(v);
    } catch (const std::exception&) {
        throw SpdFormatError("spd: bad numeric field '" + tok + "'");
    }
}

} // namespace

AdjacencyMap import_adjacency(const SpdRecord& record) {
    std::istringstream in(record.text);
    std::string tok;
    if (!(in >> tok) || tok != "spd") throw SpdFormatError("spd: bad magic");
    if (!(in >> tok) || tok != "v1") throw SpdFormatError("spd: unsupported version");
    if (!(in >> tok)) throw SpdFormatError("spd: truncated header");
    uint32_t banks = parse_field(tok, "banks=");
    if (!(in >> tok)) throw SpdFormatError("spd: truncated header");
    uint32_t rows = parse_field(tok, "rows=");
    if (banks == 0 || rows == 0) throw SpdFormatError("spd: zero banks or rows");

    std::vector<std::vector<uint32_t>> l2p(banks, std::vector<uint32_t>(rows));
    uint32_t max_phys = rows - 1;
    for (uint32_t b = 0; b < banks; ++b) {
        if (!(in >> tok) || tok != "bank") throw SpdFormatError("spd: truncated record");
        if (!(in >> tok)) throw SpdFormatError("spd: truncated record");
        // bank number carries a trailing ':'
        if (tok != std::to_string(b) + ":")
            throw SpdFormatError("spd: malformed or out-of-order bank line '" + tok + "'");
        for (uint32_t r = 0; r < rows; ++r) {
            if (!(in >> l2p[b][r])) throw SpdFormatError("spd: truncated record");
            max_phys = std::max(max_phys, l2p[b][r]);
        }
    }
    if (in >> tok) throw SpdFormatError("spd: trailing data '" + tok + "'");

    try {
        return AdjacencyMap::from_mapping(banks, rows, max_phys + 1, l2p);
    } catch (const AddressError& e) {
        throw SpdFormatError(std::string("spd: ") + e.what());
    }
}

} // namespace hammersim
