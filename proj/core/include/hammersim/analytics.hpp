#pragma once

#include <cstdint>

namespace hammersim::analytics {

/// Probability that a fixed interior victim is never PARA-refreshed across
/// n aggressor closes on one side: (1 - p/2)^n.
double para_survival_prob(double p, uint64_t n);

/// Hammer budget: activations achievable against one victim between its
/// refreshes, floor((window/k) / tRC).
uint64_t max_activations_per_window(double window_ms, uint64_t trc_ns, uint32_t k);

/// Smallest integer k such that the hammer budget drops below t_min.
uint64_t required_refresh_multiplier(double window_ms, uint64_t trc_ns, uint64_t t_min);

/// Fraction of wall time spent refreshing: k * rows * tRFC / window.
double refresh_time_overhead(uint64_t rows, double window_ms, uint64_t trfc_row_ns, uint32_t k);

} // namespace hammersim::analytics
