#include <doctest.h>

#include <sstream>

#include "hammersim/experiment.hpp"

using namespace hammersim;

namespace {

const char* kBaseConfig = R"(
# small hammer experiment
geometry.banks = 1
geometry.rows = 8
geometry.bits_per_row = 64
fault.vulnerable_fraction = 1.0
fault.threshold_min = 100
fault.threshold_max = 100
workload.kind = double_sided
workload.victim_row = 4
workload.count = 50
seed = 42
)";

ExperimentConfig base_config() {
    std::istringstream in(kBaseConfig);
    return parse_config(in);
}

std::string csv_of(const std::vector<RunReport>& reports) {
    std::ostringstream out;
    emit_csv(reports, out);
    return out.str();
}

} // namespace

TEST_CASE("config parsing") {
    ExperimentConfig cfg = base_config();
    CHECK(cfg.geometry.rows_per_bank == 8);
    CHECK(cfg.fault.threshold_min == 100);
    CHECK(cfg.workload.kind == WorkloadKind::DoubleSided);
    CHECK(cfg.seed == 42);

    SUBCASE("unknown keys are named in the error") {
        std::istringstream in("geometry.rowz = 8\n");
        try {
            parse_config(in);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("geometry.rowz") != std::string::npos);
        }
    }
    SUBCASE("bad values are rejected with the key path") {
        std::istringstream in("fault.vulnerable_fraction = lots\n");
        CHECK_THROWS_AS(parse_config(in), ConfigError);
    }
    SUBCASE("mitigation set parses combinations") {
        ExperimentConfig cfg2 = base_config();
        apply_config_entry(cfg2, "mitigation", "refreshx,para");
        apply_config_entry(cfg2, "para.p", "0.25");
        apply_config_entry(cfg2, "refreshx.k", "3");
        CHECK(cfg2.mitigation.refreshx);
        CHECK(cfg2.mitigation.para);
        CHECK(cfg2.mitigation.para_p == 0.25);
        CHECK(cfg2.mitigation.label() == "refreshx+para");
    }
    SUBCASE("retire rows parse bank:row lists") {
        ExperimentConfig cfg2 = base_config();
        apply_config_entry(cfg2, "mitigation", "retire");
        apply_config_entry(cfg2, "retire.rows", "3,0:5");
        REQUIRE(cfg2.mitigation.retire_list.size() == 2);
        CHECK(cfg2.mitigation.retire_list[0] == RowAddress{0, 3});
        CHECK(cfg2.mitigation.retire_list[1] == RowAddress{0, 5});
    }
}

TEST_CASE("run_experiment") {
    ExperimentConfig cfg = base_config();

    SUBCASE("unmitigated double-sided at threshold flips") {
        RunReport r = run_experiment(cfg, cfg.seed);
        CHECK(!r.flips.empty());
        CHECK(r.counters.acts == 100);
    }
    SUBCASE("counters at half the threshold suppress all flips") {
        ExperimentConfig guarded = cfg;
        apply_config_entry(guarded, "mitigation", "counters");
        apply_config_entry(guarded, "counters.threshold", "50");
        RunReport r = run_experiment(guarded, cfg.seed);
        CHECK(r.flips.empty());
        CHECK(r.counters.mitigation_refreshes > 0);
    }
    SUBCASE("same config and seed give byte-identical CSV") {
        std::string a = csv_of({run_experiment(cfg, cfg.seed)});
        std::string b = csv_of({run_experiment(cfg, cfg.seed)});
        CHECK(a == b);
    }
    SUBCASE("flip count column matches the flip log length") {
        RunReport r = run_experiment(cfg, cfg.seed);
        std::string csv = csv_of({r});
        // flips is field 8 (0-based 7)
        std::istringstream in(csv);
        std::string header, row;
        std::getline(in, header);
        std::getline(in, row);
        std::vector<std::string> fields;
        std::istringstream rs(row);
        std::string fld;
        while (std::getline(rs, fld, ',')) fields.push_back(fld);
        REQUIRE(fields.size() >= 8);
        CHECK(fields[7] == std::to_string(r.flips.size()));
    }
}

TEST_CASE("csv schema") {
    ExperimentConfig cfg = base_config();
    RunReport r = run_experiment(cfg, 1);
    std::string csv = csv_of({r});
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "seed,workload,mitigation,para_p,refresh_k,counter_threshold,acts,flips,"
          "auto_refreshes,mitigation_refreshes,device_refreshes,ecc_corrected,"
          "ecc_uncorrectable,sim_time_ns");
    // one report -> exactly 2 lines
    int lines = 1;
    std::string rest;
    while (std::getline(in, rest))
        if (!rest.empty()) ++lines;
    CHECK(lines == 2);

    SUBCASE("inactive knob fields are empty") {
        std::istringstream in2(csv);
        std::string h, row;
        std::getline(in2, h);
        std::getline(in2, row);
        std::vector<std::string> fields;
        std::string fld;
        std::istringstream rs(row);
        while (std::getline(rs, fld, ',')) fields.push_back(fld);
        CHECK(fields[2] == "none");
        CHECK(fields[3].empty());
        CHECK(fields[4].empty());
        CHECK(fields[5].empty());
    }
}

TEST_CASE("sweep") {
    ExperimentConfig cfg = base_config();
    apply_config_entry(cfg, "fault.threshold_min", "400");
    apply_config_entry(cfg, "fault.threshold_max", "400");
    apply_config_entry(cfg, "workload.count", "5000");
    apply_config_entry(cfg, "timing.refresh_window_ms", "0.1");
    apply_config_entry(cfg, "mitigation", "refreshx");

    SUBCASE("flip counts are non-increasing in the refresh multiplier") {
        auto reports = sweep(cfg, "refreshx.k", {"1", "2", "3", "4", "5", "6", "7", "8"});
        REQUIRE(reports.size() == 8);
        for (size_t i = 1; i < reports.size(); ++i)
            CHECK(reports[i].flips.size() <= reports[i - 1].flips.size());
        CHECK(!reports[0].flips.empty());
        CHECK(reports.back().flips.empty());
    }
    SUBCASE("empty values give an empty report list") {
        CHECK(sweep(cfg, "refreshx.k", {}).empty());
    }
    SUBCASE("para sweep: mitigation refreshes track p times closes") {
        ExperimentConfig pcfg = base_config();
        apply_config_entry(pcfg, "mitigation", "para");
        apply_config_entry(pcfg, "workload.kind", "single_sided");
        apply_config_entry(pcfg, "workload.aggressor_row", "4");
        apply_config_entry(pcfg, "workload.count", "20000");
        apply_config_entry(pcfg, "fault.vulnerable_fraction", "0");
        auto reports = sweep(pcfg, "para.p", {"0", "0.5", "1"});
        REQUIRE(reports.size() == 3);
        CHECK(reports[0].counters.mitigation_refreshes == 0);
        double n = 20000;
        double sigma = std::sqrt(n * 0.25);
        CHECK(std::abs(double(reports[1].counters.mitigation_refreshes) - 0.5 * n) <= 3 * sigma);
        CHECK(reports[2].counters.mitigation_refreshes == 20000);
    }
}

TEST_CASE("multi-trial runs are deterministic and ordered by trial index") {
    ExperimentConfig cfg = base_config();
    cfg.trial_count = 8;
    auto a = run_trials(cfg);
    auto b = run_trials(cfg);
    CHECK(csv_of(a) == csv_of(b));
    REQUIRE(a.size() == 8);
    for (size_t i = 0; i < 8; ++i) CHECK(a[i].seed == derive_seed(cfg.seed, i));
}

TEST_CASE("ecc scrub census flows into the report") {
    ExperimentConfig cfg = base_config();
    apply_config_entry(cfg, "ecc", "on");
    apply_config_entry(cfg, "fault.vulnerable_fraction", "0");
    RunReport r = run_experiment(cfg, 3);
    CHECK(r.ecc_clean == 8);
    CHECK(r.ecc_corrected == 0);
    CHECK(r.ecc_uncorrectable == 0);
}
