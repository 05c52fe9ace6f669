#include "hammersim/analytics.hpp"

#include <cmath>
#include <stdexcept>

namespace hammersim::analytics {

double para_survival_prob(double p, uint64_t n) {
    if (p < 0.0 || p > 1.0) throw std::domain_error("para_survival_prob: p must be in [0,1]");
    return std::pow(1.0 - p / 2.0, double(n));
}

uint64_t max_activations_per_window(double window_ms, uint64_t trc_ns, uint32_t k) {
    if (window_ms <= 0 || trc_ns == 0 || k == 0)
        throw std::domain_error("max_activations_per_window: inputs must be positive");
    return uint64_t(std::floor((window_ms * 1e6 / double(k)) / double(trc_ns)));
}

uint64_t required_refresh_multiplier(double window_ms, uint64_t trc_ns, uint64_t t_min) {
    if (t_min < 1) throw std::domain_error("required_refresh_multiplier: t_min must be >= 1");
    uint64_t budget1 = max_activations_per_window(window_ms, trc_ns, 1);
    if (budget1 < t_min) return 1;
    // smallest k with floor(budget(k)) < t_min; the estimate is within one
    uint64_t k = budget1 / t_min;
    while (k >= 1 && max_activations_per_window(window_ms, trc_ns, uint32_t(k)) < t_min) --k;
    ++k;
    while (max_activations_per_window(window_ms, trc_ns, uint32_t(k)) >= t_min) ++k;
    return k;
}

double refresh_time_overhead(uint64_t rows, double window_ms, uint64_t trfc_row_ns, uint32_t k) {
    if (window_ms <= 0 || trfc_row_ns == 0 || k == 0)
        throw std::domain_error("refresh_time_overhead: inputs must be positive");
    return double(k) * double(rows) * double(trfc_row_ns) / (window_ms * 1e6);
}

} // namespace hammersim::analytics
