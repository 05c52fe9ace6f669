#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hammersim/controller.hpp"
#include "hammersim/dram.hpp"
#include "hammersim/mitigation.hpp"
#include "hammersim/workloads.hpp"

namespace hammersim {

struct RunReport {
    uint64_t seed = 0;
    std::string workload;
    std::string mitigation;
    double para_p_used = 0.0;           // active knob values, for the CSV
    uint32_t refresh_k_used = 1;
    uint64_t counter_threshold_used = 0;
    ControllerCounters counters;
    std::vector<FlipRecord> flips;
    uint64_t ecc_clean = 0;
    uint64_t ecc_corrected = 0;
    uint64_t ecc_uncorrectable = 0;
    uint64_t simulated_time_ns = 0;
};

struct ExperimentConfig {
    Geometry geometry;
    TimingParams timing;
    FaultModelParams fault;
    DeviceConfig device;
    MitigationConfig mitigation;
    WorkloadSpec workload;
    uint64_t seed = 1;
    uint64_t trial_count = 1;
    std::string output_path;
    std::string flip_log_path;

    void validate() const;
};

/// Parses the line-oriented `section.key = value` experiment format.
/// Unknown keys are rejected with the offending key in the message.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);
/// Applies one `section.key = value` assignment to an existing config.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// One seeded end-to-end simulation. Deterministic in (config, seed).
RunReport run_experiment(const ExperimentConfig& config, uint64_t seed);

/// trial_count runs with seeds derive_seed(config.seed, i); respects the
/// HAMMERSIM_THREADS cap, reports ordered by trial index.
std::vector<RunReport> run_trials(const ExperimentConfig& config);

/// One run per axis value, seeds config.seed + index.
std::vector<RunReport> sweep(const ExperimentConfig& config, const std::string& axis,
                             const std::vector<std::string>& values);

void emit_csv(const std::vector<RunReport>& reports, std::ostream& out);
void emit_csv(const std::vector<RunReport>& reports, const std::string& path);

void emit_flip_log(const RunReport& report, std::ostream& out);

/// ECC scrub: decode every word slot, repair correctable ones in place,
/// tally the census into the report.
void scrub_with_ecc(DramDevice& device, RunReport& report);

} // namespace hammersim
