#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "irses/harness.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    bool verbose = false;
};

irses::ExperimentConfig load_config(const CommonArgs& args) {
    irses::ExperimentConfig cfg = args.config_path.empty()
                                      ? irses::ExperimentConfig{}
                                      : irses::ExperimentConfig::from_file(args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    if (args.tol) cfg.tol = *args.tol;
    if (!args.out_path.empty()) cfg.path = args.out_path;
    cfg.validate();
    return cfg;
}

void write_output(const irses::ExperimentConfig& cfg, const std::string& content) {
    if (cfg.path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(cfg.path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + cfg.path + "'");
    out << content;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Experiment configuration file");
    cmd->add_option("--out", args.out_path, "Output path (default: stdout)");
    cmd->add_option("--seed", args.seed, "Master seed override");
    cmd->add_option("--tol", args.tol, "Solver tolerance override");
    cmd->add_flag("--verbose", args.verbose, "Trace solver progress to stderr");
}

int fail_with_json(const std::string& type, const std::string& message,
                   const std::string& field = "") {
    nlohmann::ordered_json err;
    err["error"] = {{"type", type}, {"message", message}};
    if (!field.empty()) err["error"]["field"] = field;
    std::cerr << err.dump() << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Passive reflection synthesis for region-wide radar echo suppression"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* solve = app.add_subcommand("solve", "Solve one instance, report JSON");
    CLI::App* sweep_gain =
        app.add_subcommand("sweep-gain", "Gain versus spatial frequency (CSV)");
    CLI::App* sweep_elements =
        app.add_subcommand("sweep-elements", "Max gain versus element count (CSV)");
    CLI::App* sweep_samples =
        app.add_subcommand("sweep-samples", "Max gain versus sample count (CSV)");
    CLI::App* simulate =
        app.add_subcommand("simulate", "Monte-Carlo echo simulation over a region (JSON)");
    for (CLI::App* cmd : {solve, sweep_gain, sweep_elements, sweep_samples, simulate})
        add_common(cmd, args);

    CLI11_PARSE(app, argc, argv);

    try {
        irses::ExperimentConfig cfg = load_config(args);
        std::string content;
        if (solve->parsed()) content = irses::run_solve(cfg);
        else if (sweep_gain->parsed()) content = irses::run_sweep_gain(cfg);
        else if (sweep_elements->parsed()) content = irses::run_sweep_elements(cfg);
        else if (sweep_samples->parsed()) content = irses::run_sweep_samples(cfg);
        else if (simulate->parsed()) content = irses::run_simulate(cfg);
        write_output(cfg, content);
        return 0;
    } catch (const irses::ConfigError& e) {
        return fail_with_json("config", e.what(), e.field);
    } catch (const irses::InfeasibleProblemError& e) {
        return fail_with_json("infeasible", e.what());
    } catch (const irses::NonConvergenceError& e) {
        return fail_with_json("non-convergence", e.what());
    } catch (const std::exception& e) {
        return fail_with_json("error", e.what());
    }
}
