#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hammersim/types.hpp"

namespace hammersim {

/// Controller-side countermeasures. Policies combine freely; an empty set
/// is the unmitigated baseline.
struct MitigationConfig {
    bool refreshx = false;
    uint32_t refresh_multiplier = 1;

    bool para = false;
    double para_p = 0.0;
    bool para_both_neighbors = false; // refresh both neighbors instead of one

    bool counters = false;
    uint64_t counter_threshold = 1;

    bool retire = false;
    std::vector<RowAddress> retire_list;

    void validate() const {
        if (refreshx && refresh_multiplier < 1)
            throw ConfigError("mitigation: refreshx.k must be >= 1");
        if (para && (para_p < 0.0 || para_p > 1.0))
            throw ConfigError("mitigation: para.p must be in [0,1]");
        if (counters && counter_threshold < 1)
            throw ConfigError("mitigation: counters.threshold must be >= 1");
    }

    uint32_t effective_multiplier() const { return refreshx ? refresh_multiplier : 1; }

    bool none() const { return !refreshx && !para && !counters && !retire; }

    std::string label() const;
};

/// Per-row refresh period under the configured multiplier, in nanoseconds.
double effective_refresh_period_ns(const MitigationConfig& cfg, const TimingParams& timing);

} // namespace hammersim
