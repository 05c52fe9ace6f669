// hammersim: seeded RowHammer experiments from line-oriented config files.
//
//   hammersim run <config> [--seed N] [--out path]
//   hammersim sweep <config> --axis KEY --values v1,v2,... [--out path]
//   hammersim analyze --formula NAME --args k=v,...

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "hammersim/analytics.hpp"
#include "hammersim/experiment.hpp"

using namespace hammersim;

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) out.push_back(item);
    return out;
}

std::map<std::string, std::string> parse_args_list(const std::vector<std::string>& items) {
    std::map<std::string, std::string> out;
    for (const std::string& item : items) {
        for (const std::string& kv : split_commas(item)) {
            size_t eq = kv.find('=');
            if (eq == std::string::npos)
                throw ConfigError("analyze: expected key=value, got '" + kv + "'");
            out[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
    }
    return out;
}

double arg_d(const std::map<std::string, std::string>& args, const std::string& key) {
    auto it = args.find(key);
    if (it == args.end()) throw ConfigError("analyze: missing argument '" + key + "'");
    return std::stod(it->second);
}

uint64_t arg_u(const std::map<std::string, std::string>& args, const std::string& key) {
    auto it = args.find(key);
    if (it == args.end()) throw ConfigError("analyze: missing argument '" + key + "'");
    return std::stoull(it->second);
}

void write_reports(const std::vector<RunReport>& reports, const std::string& out_path) {
    if (out_path.empty()) {
        emit_csv(reports, std::cout);
    } else {
        emit_csv(reports, out_path);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RowHammer disturbance-error simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path, axis, values_csv, formula, flip_log_path;
    std::vector<std::string> analyze_args;
    uint64_t seed_override = 0;
    bool seed_set = false;

    auto* run = app.add_subcommand("run", "run one experiment from a config file");
    run->add_option("config", config_path, "experiment config file")->required();
    auto* seed_opt = run->add_option("--seed", seed_override, "override the config seed");
    run->add_option("--out", out_path, "CSV output path (default: stdout or config 'out')");
    run->add_option("--flip-log", flip_log_path, "write the flip log CSV here");

    auto* sw = app.add_subcommand("sweep", "sweep one numeric config key");
    sw->add_option("config", config_path, "experiment config file")->required();
    sw->add_option("--axis", axis, "config key to sweep, e.g. para.p")->required();
    sw->add_option("--values", values_csv, "comma-separated values")->required();
    sw->add_option("--out", out_path, "CSV output path");

    auto* an = app.add_subcommand("analyze", "evaluate a closed-form formula");
    an->add_option("--formula", formula,
                   "para_survival | max_acts | required_k | refresh_overhead")
        ->required();
    an->add_option("--args", analyze_args, "key=value arguments");

    CLI11_PARSE(app, argc, argv);
    seed_set = seed_opt->count() > 0;

    try {
        if (*run) {
            ExperimentConfig cfg = parse_config_file(config_path);
            if (seed_set) cfg.seed = seed_override;
            if (out_path.empty()) out_path = cfg.output_path;
            if (flip_log_path.empty()) flip_log_path = cfg.flip_log_path;
            std::vector<RunReport> reports = run_trials(cfg);
            write_reports(reports, out_path);
            if (!flip_log_path.empty()) {
                std::ofstream flog(flip_log_path, std::ios::binary);
                if (!flog) throw SimError("cannot open flip log: " + flip_log_path);
                for (const RunReport& r : reports) emit_flip_log(r, flog);
            }
        } else if (*sw) {
            ExperimentConfig cfg = parse_config_file(config_path);
            if (out_path.empty()) out_path = cfg.output_path;
            write_reports(sweep(cfg, axis, split_commas(values_csv)), out_path);
        } else if (*an) {
            auto args = parse_args_list(analyze_args);
            if (formula == "para_survival") {
                std::cout << analytics::para_survival_prob(arg_d(args, "p"), arg_u(args, "n"))
                          << "\n";
            } else if (formula == "max_acts") {
                std::cout << analytics::max_activations_per_window(
                                 arg_d(args, "window_ms"), arg_u(args, "trc_ns"),
                                 uint32_t(arg_u(args, "k")))
                          << "\n";
            } else if (formula == "required_k") {
                std::cout << analytics::required_refresh_multiplier(arg_d(args, "window_ms"),
                                                                    arg_u(args, "trc_ns"),
                                                                    arg_u(args, "t_min"))
                          << "\n";
            } else if (formula == "refresh_overhead") {
                std::cout << analytics::refresh_time_overhead(
                                 arg_u(args, "rows"), arg_d(args, "window_ms"),
                                 arg_u(args, "trfc_row_ns"), uint32_t(arg_u(args, "k")))
                          << "\n";
            } else {
                throw ConfigError("analyze: unknown formula '" + formula + "'");
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "hammersim: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
