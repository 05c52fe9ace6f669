#include "hammersim/dram.hpp"

#include "hammersim/ecc.hpp"

#include <string>

namespace hammersim {

DramDevice::DramDevice(const Geometry& geom, const TimingParams& timing,
                       const FaultModelParams& fault, uint64_t seed, const DeviceConfig& cfg)
    : geom_(geom), timing_(timing), fault_(fault), cfg_(cfg) {
    geom_.validate();
    timing_.validate();
    fault_.validate();

    cells_per_row_ = geom_.words_per_row() * (cfg_.ecc ? 72u : 64u);

    adj_ = cfg_.random_adjacency
               ? AdjacencyMap::seeded_permutation(geom_.banks, geom_.rows_per_bank,
                                                  geom_.spare_rows_per_bank, derive_seed(seed, 1))
               : AdjacencyMap::identity(geom_.banks, geom_.rows_per_bank,
                                        geom_.spare_rows_per_bank);

    size_t slots = size_t(geom_.banks) * geom_.physical_rows_per_bank() * geom_.words_per_row();
    data_.resize(slots);
    for (size_t i = 0; i < slots; ++i) data_[i] = fill_word(uint32_t(i % geom_.words_per_row()));
    if (cfg_.ecc) {
        check_.resize(slots);
        for (size_t i = 0; i < slots; ++i) check_[i] = ecc::encode(data_[i]).check;
    }

    profiles_ = sample_profiles(geom_, fault_, cells_per_row_, derive_seed(seed, 2));
    exposure_ = ExposureTable(geom_.banks, geom_.physical_rows_per_bank());
    next_spare_.assign(geom_.banks, geom_.rows_per_bank);
}

uint64_t DramDevice::fill_word(uint32_t word_index) const {
    switch (cfg_.fill) {
        case FillPattern::Zeros: return 0;
        case FillPattern::Ones: return ~0ull;
        case FillPattern::Checkerboard:
            return (word_index % 2 == 0) ? 0xAAAAAAAAAAAAAAAAull : 0x5555555555555555ull;
    }
    return 0;
}

void DramDevice::check_address(RowAddress addr) const {
    if (addr.bank >= geom_.banks)
        throw AddressError("bank " + std::to_string(addr.bank) + " out of range");
    if (addr.row >= geom_.rows_per_bank)
        throw AddressError("row " + std::to_string(addr.row) + " out of range");
}

std::vector<RowAddress> DramDevice::physical_neighbors(RowAddress addr) const {
    check_address(addr);
    return adj_.neighbors(addr);
}

size_t DramDevice::slot_index(uint32_t bank, uint32_t phys_row, uint32_t word_index) const {
    return (size_t(bank) * geom_.physical_rows_per_bank() + phys_row) * geom_.words_per_row() +
           word_index;
}

uint64_t DramDevice::read_word(RowAddress addr, uint32_t word_index) const {
    check_address(addr);
    if (word_index >= geom_.words_per_row()) throw AddressError("word index out of range");
    return data_[slot_index(addr.bank, adj_.physical_of(addr.bank, addr.row), word_index)];
}

void DramDevice::write_word(RowAddress addr, uint32_t word_index, uint64_t data) {
    check_address(addr);
    if (word_index >= geom_.words_per_row()) throw AddressError("word index out of range");
    size_t slot = slot_index(addr.bank, adj_.physical_of(addr.bank, addr.row), word_index);
    data_[slot] = data;
    if (cfg_.ecc) check_[slot] = ecc::encode(data).check;
}

uint8_t DramDevice::read_check_byte(RowAddress addr, uint32_t word_index) const {
    check_address(addr);
    if (!cfg_.ecc) throw SimError("check bytes only exist in ECC mode");
    if (word_index >= geom_.words_per_row()) throw AddressError("word index out of range");
    return check_[slot_index(addr.bank, adj_.physical_of(addr.bank, addr.row), word_index)];
}

void DramDevice::write_check_byte(RowAddress addr, uint32_t word_index, uint8_t check) {
    check_address(addr);
    if (!cfg_.ecc) throw SimError("check bytes only exist in ECC mode");
    if (word_index >= geom_.words_per_row()) throw AddressError("word index out of range");
    check_[slot_index(addr.bank, adj_.physical_of(addr.bank, addr.row), word_index)] = check;
}

uint8_t DramDevice::get_cell(uint32_t bank, uint32_t phys_row, uint32_t cell) const {
    if (cfg_.ecc) {
        uint32_t slot = cell / 72, pos = cell % 72;
        size_t i = slot_index(bank, phys_row, slot);
        if (pos < 64) return (data_[i] >> pos) & 1;
        return (check_[i] >> (pos - 64)) & 1;
    }
    size_t i = slot_index(bank, phys_row, cell / 64);
    return (data_[i] >> (cell % 64)) & 1;
}

void DramDevice::set_cell(uint32_t bank, uint32_t phys_row, uint32_t cell, uint8_t v) {
    if (cfg_.ecc) {
        uint32_t slot = cell / 72, pos = cell % 72;
        size_t i = slot_index(bank, phys_row, slot);
        if (pos < 64) {
            data_[i] = (data_[i] & ~(1ull << pos)) | (uint64_t(v & 1) << pos);
        } else {
            uint32_t cp = pos - 64;
            check_[i] = uint8_t((check_[i] & ~(1u << cp)) | (uint32_t(v & 1) << cp));
        }
        return;
    }
    size_t i = slot_index(bank, phys_row, cell / 64);
    uint32_t pos = cell % 64;
    data_[i] = (data_[i] & ~(1ull << pos)) | (uint64_t(v & 1) << pos);
}

uint32_t DramDevice::record_aggressor_activation(RowAddress aggressor, uint32_t out[2]) {
    check_address(aggressor);
    uint32_t phys = adj_.physical_of(aggressor.bank, aggressor.row);
    uint32_t n = adj_.physical_neighbors_of(phys, out);
    for (uint32_t i = 0; i < n; ++i) exposure_.increment(aggressor.bank, out[i]);
    return n;
}

std::vector<uint32_t> DramDevice::record_aggressor_activation(RowAddress aggressor) {
    uint32_t buf[2];
    uint32_t n = record_aggressor_activation(aggressor, buf);
    return std::vector<uint32_t>(buf, buf + n);
}

std::vector<FlipRecord> DramDevice::materialize_flips(uint32_t bank,
                                                      const std::vector<uint32_t>& phys_rows,
                                                      uint64_t now_ns) {
    std::vector<FlipRecord> flips;
    materialize_flips(bank, phys_rows.data(), uint32_t(phys_rows.size()), now_ns, flips);
    return flips;
}

void DramDevice::materialize_flips(uint32_t bank, const uint32_t* phys_rows, uint32_t count,
                                   uint64_t now_ns, std::vector<FlipRecord>& flips) {
    for (uint32_t i = 0; i < count; ++i) {
        uint32_t p = phys_rows[i];
        uint64_t exp = exposure_.get(bank, p);
        auto& cells = profiles_.at(bank, p);
        if (cells.empty()) continue;
        uint32_t logical = adj_.logical_of(bank, p);
        for (auto& cell : cells) {
            if (cell.flipped || exp < cell.threshold) continue;
            if (get_cell(bank, p, cell.cell) != cell.charged) continue;
            uint8_t discharged = cell.charged ^ 1;
            set_cell(bank, p, cell.cell, discharged);
            cell.flipped = true;
            // flips in unmapped (retired-away) physical rows are invisible
            if (logical != kUnmappedRow)
                flips.push_back({now_ns, {bank, logical}, cell.cell, cell.charged, discharged});
        }
    }
}

void DramDevice::reset_exposure(uint32_t bank, uint32_t phys_row) {
    exposure_.reset(bank, phys_row);
    for (auto& cell : profiles_.at(bank, phys_row)) cell.flipped = false;
}

void DramDevice::reset_exposure(RowAddress addr) {
    check_address(addr);
    reset_exposure(addr.bank, adj_.physical_of(addr.bank, addr.row));
}

uint64_t DramDevice::exposure(RowAddress addr) const {
    check_address(addr);
    return exposure_.get(addr.bank, adj_.physical_of(addr.bank, addr.row));
}

uint64_t DramDevice::exposure_physical(uint32_t bank, uint32_t phys_row) const {
    return exposure_.get(bank, phys_row);
}

std::vector<RetireRecord> DramDevice::retire_rows(const std::vector<RowAddress>& rows) {
    for (RowAddress addr : rows) check_address(addr);
    std::vector<RetireRecord> report;
    for (RowAddress addr : rows) {
        if (next_spare_[addr.bank] >= geom_.physical_rows_per_bank())
            throw SparesExhausted("no spare rows left in bank " + std::to_string(addr.bank));
        uint32_t spare = next_spare_[addr.bank]++;
        uint32_t old_phys = adj_.physical_of(addr.bank, addr.row);
        for (uint32_t w = 0; w < geom_.words_per_row(); ++w) {
            data_[slot_index(addr.bank, spare, w)] = data_[slot_index(addr.bank, old_phys, w)];
            if (cfg_.ecc)
                check_[slot_index(addr.bank, spare, w)] = check_[slot_index(addr.bank, old_phys, w)];
        }
        adj_.remap(addr.bank, addr.row, spare);
        reset_exposure(addr.bank, spare);
        report.push_back({addr, old_phys, spare});
    }
    return report;
}

void DramDevice::import_adjacency_map(const AdjacencyMap& map) {
    if (map.banks() != geom_.banks || map.rows() != geom_.rows_per_bank ||
        map.physical_rows() > geom_.physical_rows_per_bank())
        throw SpdFormatError("spd: record does not match device geometry");
    AdjacencyMap widened = map;
    if (map.physical_rows() < geom_.physical_rows_per_bank()) {
        std::vector<std::vector<uint32_t>> l2p(geom_.banks, std::vector<uint32_t>(geom_.rows_per_bank));
        for (uint32_t b = 0; b < geom_.banks; ++b)
            for (uint32_t r = 0; r < geom_.rows_per_bank; ++r) l2p[b][r] = map.physical_of(b, r);
        widened = AdjacencyMap::from_mapping(geom_.banks, geom_.rows_per_bank,
                                             geom_.physical_rows_per_bank(), l2p);
    }
    adj_ = widened;
}

bool DramDevice::operator==(const DramDevice& other) const {
    if (!(adj_ == other.adj_) || data_ != other.data_ || check_ != other.check_) return false;
    if (profiles_.rows.size() != other.profiles_.rows.size()) return false;
    for (size_t i = 0; i < profiles_.rows.size(); ++i) {
        const auto& a = profiles_.rows[i];
        const auto& b = other.profiles_.rows[i];
        if (a.size() != b.size()) return false;
        for (size_t j = 0; j < a.size(); ++j)
            if (a[j].cell != b[j].cell || a[j].threshold != b[j].threshold ||
                a[j].charged != b[j].charged)
                return false;
    }
    return true;
}

} // namespace hammersim
