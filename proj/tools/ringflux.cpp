#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/scenario.hpp"

namespace {

using namespace ringflux::cli;

struct Flags {
    std::string scenario;
    std::string out;
    std::size_t grid_points = 0;
    std::size_t random = 0;
    std::uint64_t seed = 1;
};

void add_common(CLI::App* sub, Flags& flags, bool scenario_required) {
    auto* s = sub->add_option("--scenario", flags.scenario, "Scenario JSON file");
    if (scenario_required) {
        s->required();
    }
    sub->add_option("--out", flags.out, "Write the primary output here instead of stdout");
    sub->add_option("--grid-points", flags.grid_points, "Override the number of grid points");
}

Options to_options(const Flags& flags) {
    Options opts;
    if (!flags.out.empty()) {
        opts.out = flags.out;
    }
    if (flags.grid_points != 0) {
        opts.grid_points = flags.grid_points;
    }
    if (flags.random != 0) {
        opts.random = flags.random;
    }
    opts.seed = flags.seed;
    return opts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transmission, diode and gyroscope analysis of tight-binding rings with leads"};
    app.require_subcommand(1);
    Flags flags;

    auto* sweep = app.add_subcommand("sweep", "Transmission CSV over the scenario grid");
    auto* diode = app.add_subcommand("diode", "Diode report (T_R, T_L, R, contrast)");
    auto* gyro = app.add_subcommand("gyro", "Rotation response CSV and slope report");
    auto* symmetry = app.add_subcommand("check-symmetry", "Reciprocity prediction against the computed T");
    auto* validate = app.add_subcommand("validate", "Cross-check the Bethe and Green's function solvers");
    auto* run = app.add_subcommand("run", "Run the task named in the scenario");
    for (auto* sub : {sweep, diode, gyro, symmetry, run}) {
        add_common(sub, flags, true);
    }
    add_common(validate, flags, false);
    validate->add_option("--random", flags.random, "Number of random systems to check");
    validate->add_option("--seed", flags.seed, "Seed for --random");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_code::config_error;
    }

    const Options opts = to_options(flags);
    std::optional<Scenario> scenario;
    try {
        if (!flags.scenario.empty()) {
            scenario = load_scenario(flags.scenario);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_code::config_error;
    }

    try {
        if (validate->parsed()) {
            return cmd_validate(scenario, opts, std::cout, std::cerr);
        }
        if (sweep->parsed()) {
            return cmd_sweep(*scenario, opts, std::cout, std::cerr);
        }
        if (diode->parsed()) {
            return cmd_diode(*scenario, opts, std::cout, std::cerr);
        }
        if (gyro->parsed()) {
            return cmd_gyro(*scenario, opts, std::cout, std::cerr);
        }
        if (symmetry->parsed()) {
            return cmd_check_symmetry(*scenario, opts, std::cout, std::cerr);
        }
        return cmd_run(*scenario, opts, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code::numeric_failure;
    }
}
