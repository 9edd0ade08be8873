// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "pilotreuse/pilotreuse.hpp"

namespace {

using namespace pilotreuse;

int cmd_run(const std::string& config, const std::string& out_dir, std::optional<std::uint64_t> seed,
            std::optional<int> workers, const std::string& axis, const std::vector<double>& values,
            const std::vector<std::string>& methods) {
    auto tree = read_ini_file(config);
    if (!axis.empty()) tree.put("experiment.axis", axis);
    auto plan = parse_plan(tree);
    if (seed) plan.seed = *seed;
    if (workers) plan.workers = *workers;
    if (!values.empty()) plan.values = values;
    if (!methods.empty()) {
        plan.methods.clear();
        for (const auto& name : methods) {
            const auto m = parse_method(name);
            if (!m) throw ConfigError("unknown method '" + name + "'");
            plan.methods.push_back(*m);
        }
    }
    validate(plan);
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = run_experiment(plan);
    emit_report(report, out_dir);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& p : report.points)
        std::cout << to_string(p.method) << ' ' << to_string(plan.axis) << '=' << p.axis_value << " SER=" << p.ser
                  << " [" << p.ser_ci.lo << ", " << p.ser_ci.hi << "] sum_rate=" << p.sum_rate << '\n';
    std::cout << "wrote " << out_dir << " in " << secs << " s\n";
    return 0;
}

int cmd_validate(const std::string& config) {
    const auto plan = load_plan(config);
    std::cout << "ok: N=" << plan.base.users << " K=" << plan.base.active_users << " S=" << plan.base.sectors
              << " M=" << plan.base.antennas << " tau=" << plan.base.pilot_length << ", " << plan.values.size()
              << " " << to_string(plan.axis) << " point(s), " << plan.methods.size() << " method(s)\n";
    return 0;
}

int cmd_oracle(std::uint64_t seed) {
    bool all = true;
    for (const auto& r : oracle::run_suite(seed)) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        all = all && r.passed;
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pilot reuse simulator for multi-sector massive MIMO"};
    app.require_subcommand(1);

    std::string config, out_dir = "results", axis;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::vector<double> values;
    std::vector<std::string> methods;
    auto* run = app.add_subcommand("run", "Run an experiment sweep and write CSV reports");
    run->add_option("config", config, "INI config file")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--out", out_dir, "Output directory");
    run->add_option("--seed", seed, "Override the master seed");
    run->add_option("-j,--workers", workers, "Worker threads");
    run->add_option("--axis", axis, "Sweep axis: snr_db|antennas|pilot_length");
    run->add_option("--values", values, "Sweep values")->delimiter(',');
    run->add_option("--methods", methods, "Methods, e.g. NN_CHART,RANDOM")->delimiter(',');

    std::string validate_config;
    auto* val = app.add_subcommand("validate", "Check a config file without running");
    val->add_option("config", validate_config, "INI config file")->required()->check(CLI::ExistingFile);

    std::uint64_t oracle_seed = 1;
    auto* orc = app.add_subcommand("oracle", "Run the brute-force and reference-oracle checks");
    orc->add_option("--seed", oracle_seed, "Seed for the random instances");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return cmd_run(config, out_dir, seed, workers, axis, values, methods);
        if (*val) return cmd_validate(validate_config);
        if (*orc) return cmd_oracle(oracle_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
