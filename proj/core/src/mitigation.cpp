#include "hammersim/mitigation.hpp"

namespace hammersim {

std::string MitigationConfig::label() const {
    if (none()) return "none";
    std::string out;
    auto add = [&out](const char* name) {
        if (!out.empty()) out += '+';
        out += name;
    };
    if (refreshx) add("refreshx");
    if (para) add("para");
    if (counters) add("counters");
    if (retire) add("retire");
    return out;
}

double effective_refresh_period_ns(const MitigationConfig& cfg, const TimingParams& timing) {
    return timing.refresh_window_ns() / double(cfg.effective_multiplier());
}

} // namespace hammersim
