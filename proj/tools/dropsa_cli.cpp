#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dropsa/scenario.hpp"

namespace {

dropsa::Scenario load_scenario(const std::string& name_or_path) {
    const auto& bundled = dropsa::bundled_scenarios();
    auto it = bundled.find(name_or_path);
    if (it != bundled.end()) return dropsa::Scenario::from_json_string(it->second);
    return dropsa::Scenario::from_file(name_or_path);
}

void apply_overrides(dropsa::Scenario& sc, uint64_t seed, bool seed_set, size_t cap,
                     bool cap_set) {
    if (seed_set) sc.seeds = {seed};
    if (cap_set) sc.state_cap = cap;
}

int write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file: " << out_path << "\n";
        return 1;
    }
    out << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributed annealing simulator and exact-analysis toolkit"};
    app.require_subcommand(1);

    std::string scenario_arg;
    std::string out_path;
    uint64_t seed = 0;
    size_t cap = 0;
    int threads = 1;
    std::string axis;
    std::vector<double> axis_values;

    auto add_common = [&](CLI::App* cmd, bool with_threads) {
        cmd->add_option("scenario", scenario_arg, "Bundled scenario name or JSON file path")
            ->required();
        cmd->add_option("--out", out_path, "Output file path ('-' or empty for stdout)");
        cmd->add_option("--seed", seed, "Replace the scenario's seed list with this one seed");
        cmd->add_option("--cap", cap, "State-space enumeration cap");
        if (with_threads) cmd->add_option("--threads", threads, "Worker thread count");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "Execute a scenario, emit tidy CSV");
    add_common(run_cmd, true);

    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "Exact transition-matrix checks for a scenario");
    add_common(analyze_cmd, false);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a scenario across one parameter axis");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--axis", axis, "Axis: p | arrival | beta | cmax | d")->required();
    sweep_cmd->add_option("--values", axis_values, "Axis values")->required();

    CLI::App* list_cmd = app.add_subcommand("list-scenarios", "List bundled scenario names");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) {
            for (const auto& [name, _] : dropsa::bundled_scenarios()) std::cout << name << "\n";
            return 0;
        }

        dropsa::Scenario sc = load_scenario(scenario_arg);
        bool seed_set = false, cap_set = false;
        if (run_cmd->parsed()) {
            seed_set = run_cmd->count("--seed") > 0;
            cap_set = run_cmd->count("--cap") > 0;
        } else if (analyze_cmd->parsed()) {
            seed_set = analyze_cmd->count("--seed") > 0;
            cap_set = analyze_cmd->count("--cap") > 0;
        } else if (sweep_cmd->parsed()) {
            seed_set = sweep_cmd->count("--seed") > 0;
            cap_set = sweep_cmd->count("--cap") > 0;
        }
        apply_overrides(sc, seed, seed_set, cap, cap_set);

        if (run_cmd->parsed()) {
            auto rows = dropsa::run_scenario(sc, threads);
            return write_output(dropsa::to_csv(rows), out_path);
        }
        if (analyze_cmd->parsed()) {
            dropsa::AnalysisReport report = dropsa::analyze_scenario(sc);
            int rc = write_output(report.to_text(), out_path);
            if (rc != 0) return rc;
            return report.all_pass() ? 0 : 2;
        }
        if (sweep_cmd->parsed()) {
            auto rows = dropsa::sweep_scenario(sc, axis, axis_values, threads);
            return write_output(dropsa::to_csv(rows), out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
