#include "hammersim/controller.hpp"

#include <string>

namespace hammersim {

Controller::Controller(DramDevice& device, const MitigationConfig& mitigation, uint64_t seed)
    : dev_(device), mitigation_(mitigation), rng_(derive_seed(seed, 3)) {
    mitigation_.validate();
    const Geometry& g = dev_.geometry();
    open_row_.assign(g.banks, std::nullopt);
    act_counters_.assign(size_t(g.banks) * g.rows_per_bank, 0);
    refresh_counts_.assign(size_t(g.banks) * g.physical_rows_per_bank(), 0);
    if (mitigation_.retire && !mitigation_.retire_list.empty())
        dev_.retire_rows(mitigation_.retire_list);
    next_deadline_ns_ = next_auto_deadline_ns();
}

double Controller::uniform01() {
    return double(rng_() >> 11) * 0x1.0p-53;
}

void Controller::refresh_row_physical(uint32_t bank, uint32_t phys_row, RefreshSource source) {
    dev_.reset_exposure(bank, phys_row);
    ++refresh_counts_[size_t(bank) * dev_.geometry().physical_rows_per_bank() + phys_row];
    uint32_t logical = dev_.adjacency().logical_of(bank, phys_row);
    if (logical != kUnmappedRow && mitigation_.counters)
        act_counters_[size_t(bank) * dev_.geometry().rows_per_bank + logical] = 0;
    switch (source) {
        case RefreshSource::Auto: ++counters_.auto_refreshes; break;
        case RefreshSource::Mitigation: ++counters_.mitigation_refreshes; break;
        case RefreshSource::Device: ++counters_.device_refreshes; break;
    }
    now_ns_ += dev_.timing().trfc_row_ns;
    if (record_events_) event_log_.push_back({SimEvent::Kind::Refresh, bank, phys_row, now_ns_});
}

void Controller::refresh_row_logical(RowAddress addr, RefreshSource source) {
    dev_.check_address(addr);
    refresh_row_physical(addr.bank, dev_.adjacency().physical_of(addr.bank, addr.row), source);
}

void Controller::on_activate(RowAddress aggressor) {
    if (record_events_)
        event_log_.push_back({SimEvent::Kind::Act, aggressor.bank,
                              dev_.adjacency().physical_of(aggressor.bank, aggressor.row), now_ns_});
    uint32_t victims[2];
    uint32_t n_victims = dev_.record_aggressor_activation(aggressor, victims);
    dev_.materialize_flips(aggressor.bank, victims, n_victims, now_ns_, flip_log_);

    if (mitigation_.counters) {
        size_t idx = size_t(aggressor.bank) * dev_.geometry().rows_per_bank + aggressor.row;
        if (++act_counters_[idx] >= mitigation_.counter_threshold) {
            act_counters_[idx] = 0;
            uint32_t phys = dev_.adjacency().physical_of(aggressor.bank, aggressor.row);
            for (uint32_t v : dev_.adjacency().physical_neighbors_of(phys))
                refresh_row_physical(aggressor.bank, v, RefreshSource::Mitigation);
        }
    }
}

void Controller::on_close(RowAddress closed) {
    if (!mitigation_.para || mitigation_.para_p <= 0.0) return;
    if (uniform01() >= mitigation_.para_p) return;
    uint32_t phys = dev_.adjacency().physical_of(closed.bank, closed.row);
    std::vector<uint32_t> neighbors = dev_.adjacency().physical_neighbors_of(phys);
    if (neighbors.empty()) return;
    if (mitigation_.para_both_neighbors) {
        for (uint32_t v : neighbors) refresh_row_physical(closed.bank, v, RefreshSource::Mitigation);
    } else {
        // one neighbor, chosen uniformly: each side of an interior row gets
        // p/2, an edge row's sole neighbor gets the full p
        uint32_t pick = neighbors.size() == 1 ? neighbors[0] : neighbors[rng_() % 2];
        refresh_row_physical(closed.bank, pick, RefreshSource::Mitigation);
    }
}

CommandResult Controller::issue(const DramCommand& cmd) {
    CommandResult result;
    size_t flips_before = flip_log_.size();
    switch (cmd.kind) {
        case CommandKind::Act: {
            dev_.check_address(cmd.addr);
            if (open_row_[cmd.addr.bank])
                throw BankAlreadyOpen("ACT: bank " + std::to_string(cmd.addr.bank) +
                                      " already has row " +
                                      std::to_string(*open_row_[cmd.addr.bank]) + " open");
            open_row_[cmd.addr.bank] = cmd.addr.row;
            now_ns_ += dev_.timing().trc_ns;
            ++counters_.acts;
            on_activate(cmd.addr);
            break;
        }
        case CommandKind::Pre: {
            if (cmd.addr.bank >= dev_.geometry().banks)
                throw AddressError("PRE: bank out of range");
            if (!open_row_[cmd.addr.bank])
                throw RowNotOpen("PRE: bank " + std::to_string(cmd.addr.bank) + " has no open row");
            RowAddress closed{cmd.addr.bank, *open_row_[cmd.addr.bank]};
            open_row_[cmd.addr.bank] = std::nullopt;
            on_close(closed);
            break;
        }
        case CommandKind::Rd: {
            dev_.check_address(cmd.addr);
            if (!open_row_[cmd.addr.bank] || *open_row_[cmd.addr.bank] != cmd.addr.row)
                throw RowNotOpen("RD: row " + std::to_string(cmd.addr.row) + " not open");
            result.data = dev_.read_word(cmd.addr, cmd.word_index);
            ++counters_.reads;
            break;
        }
        case CommandKind::Wr: {
            dev_.check_address(cmd.addr);
            if (!open_row_[cmd.addr.bank] || *open_row_[cmd.addr.bank] != cmd.addr.row)
                throw RowNotOpen("WR: row " + std::to_string(cmd.addr.row) + " not open");
            dev_.write_word(cmd.addr, cmd.word_index, cmd.data);
            ++counters_.writes;
            break;
        }
        case CommandKind::RefRow:
            refresh_row_logical(cmd.addr, RefreshSource::Auto);
            break;
        case CommandKind::Nop:
            now_ns_ += cmd.duration_ns;
            break;
    }
    result.new_flips.assign(flip_log_.begin() + long(flips_before), flip_log_.end());
    return result;
}

double Controller::next_auto_deadline_ns() const {
    double period = effective_refresh_period_ns(mitigation_, dev_.timing());
    uint32_t rows = dev_.geometry().rows_per_bank;
    return period * double(refresh_epoch_) + period * double(refresh_cursor_ + 1) / double(rows);
}

uint64_t Controller::tick_refresh() {
    if (double(now_ns_) < next_deadline_ns_) return 0;
    uint64_t refreshed = 0;
    uint32_t rows = dev_.geometry().rows_per_bank;
    // due-ness is judged against the clock at entry; the tRFC charges added
    // below do not make further rows due within the same tick
    const double entry_now = double(now_ns_);
    while (entry_now >= next_deadline_ns_) {
        for (uint32_t b = 0; b < dev_.geometry().banks; ++b) {
            refresh_row_physical(b, dev_.adjacency().physical_of(b, refresh_cursor_),
                                 RefreshSource::Auto);
            ++refreshed;
        }
        if (++refresh_cursor_ == rows) {
            refresh_cursor_ = 0;
            ++refresh_epoch_;
        }
        next_deadline_ns_ = next_auto_deadline_ns();
    }
    return refreshed;
}

void Controller::targeted_refresh(RowAddress addr) {
    refresh_row_logical(addr, RefreshSource::Device);
}

void Controller::replay(const std::vector<DramCommand>& trace) {
    for (const DramCommand& cmd : trace) {
        tick_refresh();
        issue(cmd);
    }
    tick_refresh();
}

} // namespace hammersim
