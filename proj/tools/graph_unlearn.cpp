// Command line harness: `run` executes one experiment config, `sweep`
// drives intensity or perturbation series, `report` rebuilds the summary
// files from a stored results.jsonl. Results land in a per-run directory
// named by the config digest.

#include "gu/error.hpp"
#include "gu/experiment.hpp"
#include "gu/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

std::string resolve_data_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("GRAPH_UNLEARN_DATA")) return env;
    return "";
}

gu::ExperimentConfig load_with_data_dir(const std::string& config_path,
                                        const std::string& data_dir) {
    gu::ExperimentConfig cfg = gu::load_config(config_path);
    if (cfg.dataset.type == "dir" && !data_dir.empty() &&
        !std::filesystem::path(cfg.dataset.path).is_absolute())
        cfg.dataset.path = (std::filesystem::path(data_dir) / cfg.dataset.path).string();
    return cfg;
}

std::string run_dir(const std::string& out_root, const gu::ExperimentConfig& cfg) {
    return (std::filesystem::path(out_root) / gu::config_digest(cfg)).string();
}

std::vector<double> parse_levels(const std::string& csv) {
    std::vector<double> out;
    std::stringstream stream(csv);
    std::string token;
    while (std::getline(stream, token, ',')) {
        try {
            out.push_back(std::stod(token));
        } catch (const std::exception&) {
            gu::fail(gu::ErrorCode::ParseError, "bad level '" + token + "'");
        }
    }
    gu::require(!out.empty(), gu::ErrorCode::ParseError, "--levels must list at least one value");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph unlearning benchmark harness"};
    app.require_subcommand(1);

    std::string config_path, out_root = "results", data_dir_flag, sweep_kind = "ratio",
                levels_csv = "0,0.1,0.2,0.3,0.4,0.5", report_dir;

    CLI::App* run_cmd = app.add_subcommand("run", "run one experiment config");
    run_cmd->add_option("config", config_path, "config JSON path")->required();
    run_cmd->add_option("--out", out_root, "output root directory");
    run_cmd->add_option("--data-dir", data_dir_flag,
                        "dataset root (env GRAPH_UNLEARN_DATA as fallback)");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "sweep request intensity or perturbations");
    sweep_cmd->add_option("config", config_path, "config JSON path")->required();
    sweep_cmd->add_option("--kind", sweep_kind,
                          "ratio | noise | label_noise | feature_noise | label_sparsity | "
                          "feature_sparsity");
    sweep_cmd->add_option("--levels", levels_csv, "comma separated levels");
    sweep_cmd->add_option("--out", out_root, "output root directory");
    sweep_cmd->add_option("--data-dir", data_dir_flag,
                          "dataset root (env GRAPH_UNLEARN_DATA as fallback)");

    CLI::App* report_cmd = app.add_subcommand("report", "regenerate summaries from results.jsonl");
    report_cmd->add_option("dir", report_dir, "run directory containing results.jsonl")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            gu::ExperimentConfig cfg =
                load_with_data_dir(config_path, resolve_data_dir(data_dir_flag));
            gu::MetricsReport report = gu::run_experiment(cfg);
            std::string dir = run_dir(out_root, cfg);
            gu::emit_report({report}, dir);
            std::cout << gu::report_to_json(report) << "\n";
            std::cout << "wrote " << dir << "\n";
        } else if (sweep_cmd->parsed()) {
            gu::ExperimentConfig cfg =
                load_with_data_dir(config_path, resolve_data_dir(data_dir_flag));
            std::vector<double> levels = parse_levels(levels_csv);
            std::string kind = sweep_kind == "noise" ? "label_noise" : sweep_kind;
            std::vector<gu::MetricsReport> reports =
                kind == "ratio" ? gu::sweep_intensity(cfg, levels)
                                : gu::sweep_perturbation(cfg, kind, levels);
            std::string dir = run_dir(out_root, cfg);
            gu::emit_report(reports, dir);
            for (const auto& r : reports) std::cout << gu::report_to_json(r) << "\n";
            std::cout << "wrote " << dir << "\n";
        } else if (report_cmd->parsed()) {
            std::ifstream in(std::filesystem::path(report_dir) / "results.jsonl");
            gu::require(in.good(), gu::ErrorCode::IoError,
                        "no results.jsonl under " + report_dir);
            std::vector<gu::MetricsReport> reports;
            std::string line;
            while (std::getline(in, line))
                if (!line.empty()) reports.push_back(gu::report_from_json(line));
            gu::emit_report(reports, report_dir);
            std::cout << "rebuilt summaries for " << reports.size() << " reports in "
                      << report_dir << "\n";
        }
    } catch (const gu::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return gu::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
