#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cli/scenario.hpp"

namespace ringflux::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config_error = 2;
inline constexpr int numeric_failure = 3;
}  // namespace exit_code

struct Options {
    std::optional<std::filesystem::path> out;
    std::optional<std::size_t> grid_points;  // overrides the grid used by the command
    std::optional<std::size_t> random;       // validate: number of random systems
    std::uint64_t seed = 1;
    unsigned threads = 0;                    // 0: RINGFLUX_THREADS / hardware
};

/// Primary output goes to `opts.out` when set (atomically) and to `out`
/// otherwise. Diagnostics go to `err`. Each returns an exit code.
int cmd_sweep(const Scenario& scenario, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_diode(const Scenario& scenario, const Options& opts, std::ostream& out, std::ostream& err);
/// Response curve CSV to `opts.out` and the JSON slope report to `out`;
/// without `opts.out` the CSV goes to `out` and the report to `err`.
int cmd_gyro(const Scenario& scenario, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_check_symmetry(const Scenario& scenario, const Options& opts, std::ostream& out, std::ostream& err);
/// Bethe vs NEGF on the scenario, or on `opts.random` random systems when the
/// scenario is absent. Exit 0 iff the maximum deviation is <= 1e-10.
int cmd_validate(const std::optional<Scenario>& scenario, const Options& opts, std::ostream& out,
                 std::ostream& err);
/// Dispatches on the scenario's `task`.
int cmd_run(const Scenario& scenario, const Options& opts, std::ostream& out, std::ostream& err);

/// %.17g; "nan" and "inf" spelled out.
std::string format_double(double x);

/// Writes to `<path>.tmp` and renames over `path` once complete.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

/// Reads a two-column (time, omega) CSV; a non-numeric first line is a header.
std::pair<std::vector<double>, std::vector<double>> read_omega_trace(const std::filesystem::path& path);

inline constexpr double validation_tolerance = 1e-10;

}  // namespace ringflux::cli
