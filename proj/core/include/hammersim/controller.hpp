#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "hammersim/dram.hpp"
#include "hammersim/mitigation.hpp"
#include "hammersim/types.hpp"

namespace hammersim {

struct CommandResult {
    std::optional<uint64_t> data;   // Rd only
    std::vector<FlipRecord> new_flips; // flips materialized by this command
};

/// One entry of the optional event log: enough for an independent replay
/// of exposure bookkeeping (activations and every refresh, any source).
struct SimEvent {
    enum class Kind : uint8_t { Act, Refresh } kind;
    uint32_t bank;
    uint32_t phys_row;
    uint64_t time_ns;
};

enum class RefreshSource : uint8_t { Auto, Mitigation, Device };

struct ControllerCounters {
    uint64_t acts = 0;
    uint64_t reads = 0;
    uint64_t writes = 0;
    uint64_t auto_refreshes = 0;       // tick_refresh and explicit REF_ROW
    uint64_t mitigation_refreshes = 0; // PARA and counter-triggered
    uint64_t device_refreshes = 0;     // targeted refresh
};

/// Memory controller for one device: bank state machine, refresh engine,
/// mitigation hooks, simulated clock.
class Controller {
public:
    Controller(DramDevice& device, const MitigationConfig& mitigation, uint64_t seed);

    CommandResult issue(const DramCommand& cmd);

    /// Refreshes every row whose staggered deadline has passed. Returns the
    /// number of (bank, row) refreshes performed.
    uint64_t tick_refresh();

    /// Device-initiated refresh of one row (the targeted refresh command).
    void targeted_refresh(RowAddress addr);

    uint64_t now_ns() const { return now_ns_; }
    std::optional<uint32_t> open_row(uint32_t bank) const { return open_row_[bank]; }
    const ControllerCounters& counters() const { return counters_; }
    const std::vector<FlipRecord>& flip_log() const { return flip_log_; }
    const MitigationConfig& mitigation() const { return mitigation_; }

    void set_record_events(bool on) { record_events_ = on; }
    const std::vector<SimEvent>& event_log() const { return event_log_; }

    /// Refreshes received by one physical row so far, any source.
    uint64_t refresh_count(uint32_t bank, uint32_t phys_row) const {
        return refresh_counts_[size_t(bank) * dev_.geometry().physical_rows_per_bank() + phys_row];
    }

    /// Replays a whole trace, interposing tick_refresh before each command.
    void replay(const std::vector<DramCommand>& trace);

private:
    void refresh_row_physical(uint32_t bank, uint32_t phys_row, RefreshSource source);
    void refresh_row_logical(RowAddress addr, RefreshSource source);
    void on_activate(RowAddress aggressor);
    void on_close(RowAddress closed);
    double next_auto_deadline_ns() const;
    double uniform01();

    DramDevice& dev_;
    MitigationConfig mitigation_;
    std::mt19937_64 rng_;

    uint64_t now_ns_ = 0;
    std::vector<std::optional<uint32_t>> open_row_; // per bank
    uint32_t refresh_cursor_ = 0; // next row due for auto-refresh
    uint64_t refresh_epoch_ = 0;
    double next_deadline_ns_ = 0; // cached next_auto_deadline_ns()
    std::vector<uint64_t> act_counters_; // per (bank, logical row), counters policy
    std::vector<uint64_t> refresh_counts_; // per (bank, physical row)

    ControllerCounters counters_;
    std::vector<FlipRecord> flip_log_;
    bool record_events_ = false;
    std::vector<SimEvent> event_log_;
};

} // namespace hammersim
