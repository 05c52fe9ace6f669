#include "hammersim/experiment.hpp"

#include "hammersim/ecc.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace hammersim {

namespace {

uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        uint64_t v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected integer, got '" + value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected number, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    throw ConfigError("config key '" + key + "': expected on/off, got '" + value + "'");
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) out.push_back(item);
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

unsigned thread_cap() {
    if (const char* env = std::getenv("HAMMERSIM_THREADS")) {
        unsigned n = unsigned(std::strtoul(env, nullptr, 10));
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

} // namespace

void ExperimentConfig::validate() const {
    geometry.validate();
    timing.validate();
    fault.validate();
    mitigation.validate();
    if (trial_count < 1) throw ConfigError("config key 'trials': must be >= 1");
    if (workload.aggressor.bank >= geometry.banks || workload.aggressor.row >= geometry.rows_per_bank)
        throw ConfigError("config key 'workload.aggressor_row': address out of range");
    if (workload.victim.bank >= geometry.banks || workload.victim.row >= geometry.rows_per_bank)
        throw ConfigError("config key 'workload.victim_row': address out of range");
    for (const RowAddress& r : mitigation.retire_list)
        if (r.bank >= geometry.banks || r.row >= geometry.rows_per_bank)
            throw ConfigError("config key 'retire.rows': address out of range");
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "geometry.banks") cfg.geometry.banks = uint32_t(parse_u64(key, value));
    else if (key == "geometry.rows") cfg.geometry.rows_per_bank = uint32_t(parse_u64(key, value));
    else if (key == "geometry.bits_per_row") cfg.geometry.bits_per_row = uint32_t(parse_u64(key, value));
    else if (key == "geometry.spare_rows") cfg.geometry.spare_rows_per_bank = uint32_t(parse_u64(key, value));
    else if (key == "timing.trc_ns") cfg.timing.trc_ns = parse_u64(key, value);
    else if (key == "timing.trfc_row_ns") cfg.timing.trfc_row_ns = parse_u64(key, value);
    else if (key == "timing.refresh_window_ms") cfg.timing.refresh_window_ms = parse_double(key, value);
    else if (key == "fault.vulnerable_fraction") cfg.fault.vulnerable_fraction = parse_double(key, value);
    else if (key == "fault.threshold_min") cfg.fault.threshold_min = parse_u64(key, value);
    else if (key == "fault.threshold_max") cfg.fault.threshold_max = parse_u64(key, value);
    else if (key == "fault.orientation") {
        if (value == "all_true") cfg.fault.orientation = OrientationPolicy::AllTrue;
        else if (value == "alternate") cfg.fault.orientation = OrientationPolicy::AlternateByPhysicalRow;
        else if (value == "random") cfg.fault.orientation = OrientationPolicy::SeededRandom;
        else throw ConfigError("config key 'fault.orientation': unknown policy '" + value + "'");
    } else if (key == "device.fill") {
        if (value == "zeros") cfg.device.fill = FillPattern::Zeros;
        else if (value == "ones") cfg.device.fill = FillPattern::Ones;
        else if (value == "checkerboard") cfg.device.fill = FillPattern::Checkerboard;
        else throw ConfigError("config key 'device.fill': unknown pattern '" + value + "'");
    } else if (key == "device.adjacency") {
        if (value == "identity") cfg.device.random_adjacency = false;
        else if (value == "random") cfg.device.random_adjacency = true;
        else throw ConfigError("config key 'device.adjacency': expected identity|random");
    } else if (key == "ecc") {
        cfg.device.ecc = parse_bool(key, value);
    } else if (key == "mitigation") {
        MitigationConfig m;
        m.refresh_multiplier = cfg.mitigation.refresh_multiplier;
        m.para_p = cfg.mitigation.para_p;
        m.para_both_neighbors = cfg.mitigation.para_both_neighbors;
        m.counter_threshold = cfg.mitigation.counter_threshold;
        m.retire_list = cfg.mitigation.retire_list;
        for (const std::string& item : split_commas(value)) {
            std::string name = trim(item);
            if (name == "none") continue;
            else if (name == "refreshx") m.refreshx = true;
            else if (name == "para") m.para = true;
            else if (name == "counters") m.counters = true;
            else if (name == "retire") m.retire = true;
            else throw ConfigError("config key 'mitigation': unknown policy '" + name + "'");
        }
        cfg.mitigation = m;
    } else if (key == "para.p") {
        cfg.mitigation.para_p = parse_double(key, value);
    } else if (key == "para.both_neighbors") {
        cfg.mitigation.para_both_neighbors = parse_bool(key, value);
    } else if (key == "refreshx.k") {
        cfg.mitigation.refresh_multiplier = uint32_t(parse_u64(key, value));
    } else if (key == "counters.threshold") {
        cfg.mitigation.counter_threshold = parse_u64(key, value);
    } else if (key == "retire.rows") {
        cfg.mitigation.retire_list.clear();
        for (const std::string& item : split_commas(value)) {
            std::string spec = trim(item);
            if (spec.empty()) continue;
            // either "row" (bank 0) or "bank:row"
            size_t colon = spec.find(':');
            RowAddress addr{};
            if (colon == std::string::npos) {
                addr.row = uint32_t(parse_u64(key, spec));
            } else {
                addr.bank = uint32_t(parse_u64(key, spec.substr(0, colon)));
                addr.row = uint32_t(parse_u64(key, spec.substr(colon + 1)));
            }
            cfg.mitigation.retire_list.push_back(addr);
        }
    } else if (key == "workload.kind") {
        if (value == "single_sided") cfg.workload.kind = WorkloadKind::SingleSided;
        else if (value == "double_sided") cfg.workload.kind = WorkloadKind::DoubleSided;
        else if (value == "uniform_random") cfg.workload.kind = WorkloadKind::UniformRandom;
        else if (value == "benign_sequential") cfg.workload.kind = WorkloadKind::BenignSequential;
        else throw ConfigError("config key 'workload.kind': unknown kind '" + value + "'");
    } else if (key == "workload.aggressor_bank") {
        cfg.workload.aggressor.bank = uint32_t(parse_u64(key, value));
    } else if (key == "workload.aggressor_row") {
        cfg.workload.aggressor.row = uint32_t(parse_u64(key, value));
    } else if (key == "workload.victim_bank") {
        cfg.workload.victim.bank = uint32_t(parse_u64(key, value));
    } else if (key == "workload.victim_row") {
        cfg.workload.victim.row = uint32_t(parse_u64(key, value));
    } else if (key == "workload.count") {
        cfg.workload.count = parse_u64(key, value);
    } else if (key == "workload.op") {
        if (value == "rd") cfg.workload.op = AccessOp::Read;
        else if (value == "wr") cfg.workload.op = AccessOp::Write;
        else throw ConfigError("config key 'workload.op': expected rd|wr");
    } else if (key == "workload.write_value") {
        try {
            cfg.workload.write_value = std::stoull(value, nullptr, 16);
        } catch (const std::exception&) {
            throw ConfigError("config key 'workload.write_value': expected hex64");
        }
    } else if (key == "seed") {
        cfg.seed = parse_u64(key, value);
    } else if (key == "trials") {
        cfg.trial_count = parse_u64(key, value);
    } else if (key == "out") {
        cfg.output_path = value;
    } else if (key == "flip_log") {
        cfg.flip_log_path = value;
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        apply_config_entry(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

RunReport run_experiment(const ExperimentConfig& config, uint64_t seed) {
    config.validate();
    DramDevice device(config.geometry, config.timing, config.fault, seed, config.device);
    Controller ctrl(device, config.mitigation, seed);
    AccessTrace trace = generate(device, config.workload, seed);
    ctrl.replay(trace.commands);

    RunReport report;
    report.seed = seed;
    report.workload = workload_name(config.workload.kind);
    report.mitigation = config.mitigation.label();
    report.para_p_used = config.mitigation.para_p;
    report.refresh_k_used = config.mitigation.refresh_multiplier;
    report.counter_threshold_used = config.mitigation.counter_threshold;
    report.counters = ctrl.counters();
    report.flips = ctrl.flip_log();
    report.simulated_time_ns = ctrl.now_ns();
    if (config.device.ecc) scrub_with_ecc(device, report);
    return report;
}

std::vector<RunReport> run_trials(const ExperimentConfig& config) {
    config.validate();
    std::vector<RunReport> reports(config.trial_count);
    unsigned workers = std::min<uint64_t>(thread_cap(), config.trial_count);
    if (workers <= 1) {
        for (uint64_t i = 0; i < config.trial_count; ++i)
            reports[i] = run_experiment(config, derive_seed(config.seed, i));
        return reports;
    }
    std::atomic<uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            uint64_t i = next.fetch_add(1);
            if (i >= config.trial_count) return;
            reports[i] = run_experiment(config, derive_seed(config.seed, i));
        }
    };
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < workers; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    return reports;
}

std::vector<RunReport> sweep(const ExperimentConfig& config, const std::string& axis,
                             const std::vector<std::string>& values) {
    std::vector<RunReport> reports;
    reports.reserve(values.size());
    for (size_t i = 0; i < values.size(); ++i) {
        ExperimentConfig point = config;
        apply_config_entry(point, axis, values[i]);
        reports.push_back(run_experiment(point, config.seed + i));
    }
    return reports;
}

void emit_csv(const std::vector<RunReport>& reports, std::ostream& out) {
    out << "seed,workload,mitigation,para_p,refresh_k,counter_threshold,acts,flips,"
           "auto_refreshes,mitigation_refreshes,device_refreshes,ecc_corrected,"
           "ecc_uncorrectable,sim_time_ns\n";
    for (const RunReport& r : reports) {
        bool para = r.mitigation.find("para") != std::string::npos;
        bool refreshx = r.mitigation.find("refreshx") != std::string::npos;
        bool counters = r.mitigation.find("counters") != std::string::npos;
        out << r.seed << ',' << r.workload << ',' << r.mitigation << ',';
        if (para) out << format_double(r.para_p_used);
        out << ',';
        if (refreshx) out << r.refresh_k_used;
        out << ',';
        if (counters) out << r.counter_threshold_used;
        out << ',' << r.counters.acts << ',' << r.flips.size() << ',' << r.counters.auto_refreshes
            << ',' << r.counters.mitigation_refreshes << ',' << r.counters.device_refreshes << ','
            << r.ecc_corrected << ',' << r.ecc_uncorrectable << ',' << r.simulated_time_ns << "\n";
    }
}

void emit_csv(const std::vector<RunReport>& reports, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SimError("cannot open output file: " + path);
    emit_csv(reports, out);
}

void emit_flip_log(const RunReport& report, std::ostream& out) {
    out << "time_ns,bank,row,bit,old,new\n";
    for (const FlipRecord& f : report.flips)
        out << f.time_ns << ',' << f.addr.bank << ',' << f.addr.row << ',' << f.bit << ','
            << int(f.old_bit) << ',' << int(f.new_bit) << "\n";
}

void scrub_with_ecc(DramDevice& device, RunReport& report) {
    const Geometry& g = device.geometry();
    for (uint32_t b = 0; b < g.banks; ++b) {
        for (uint32_t r = 0; r < g.rows_per_bank; ++r) {
            RowAddress addr{b, r};
            for (uint32_t w = 0; w < g.words_per_row(); ++w) {
                ecc::Codeword72 cw{device.read_word(addr, w), device.read_check_byte(addr, w)};
                auto [data, status] = ecc::decode(cw);
                switch (status.kind) {
                    case ecc::DecodeKind::Clean: ++report.ecc_clean; break;
                    case ecc::DecodeKind::Corrected:
                        device.write_word(addr, w, data); // also rewrites the check byte
                        ++report.ecc_corrected;
                        break;
                    case ecc::DecodeKind::DetectedUncorrectable:
                        ++report.ecc_uncorrectable;
                        break;
                }
            }
        }
    }
}

} // namespace hammersim
