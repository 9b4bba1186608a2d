#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ringflux/lattice.hpp"

namespace ringflux::cli {

/// Invalid or unreadable scenario; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RingSpec {
    std::size_t n = 3;
    double J = 1.0;
    double omega = 0.0;
    double flux = 0.0;
    FluxDistribution distribution = FluxDistribution::uniform;

    friend bool operator==(const RingSpec&, const RingSpec&) = default;
};

using LatticeSpec = std::variant<RingSpec, CentralLattice>;

/// Evenly spaced grid including both ends; one point means {min}.
struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    std::size_t points = 1;

    std::vector<double> values() const;
    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

enum class TaskKind { sweep, diode, gyro, check_symmetry, validate };
enum class SweepParameter { energy, lead_t, omega, flux };
enum class CouplingRule { fixed, g_equals_t, g2_over_t_equals_J };

struct SweepSpec {
    SweepParameter parameter = SweepParameter::energy;
    GridSpec grid;
    double energy = 0.0;  // fixed injection energy when another parameter is swept
    CouplingRule coupling = CouplingRule::fixed;

    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct DiodeSpec {
    double energy = 0.0;
    std::size_t source = 0;              // lead index
    std::optional<std::size_t> drain;    // defaults to the last lead

    friend bool operator==(const DiodeSpec&, const DiodeSpec&) = default;
};

struct GyroSpec {
    GridSpec flux{-0.5, 0.5, 101};
    std::optional<GridSpec> omega_scan;
    std::optional<std::string> trace;  // two-column CSV of (time, omega)

    friend bool operator==(const GyroSpec&, const GyroSpec&) = default;
};

struct SymmetrySpec {
    std::optional<GridSpec> energy;  // default: 50 interior band points

    friend bool operator==(const SymmetrySpec&, const SymmetrySpec&) = default;
};

struct ValidateSpec {
    std::optional<GridSpec> energy;

    friend bool operator==(const ValidateSpec&, const ValidateSpec&) = default;
};

struct Scenario {
    std::string energy_unit = "J";
    LatticeSpec lattice = RingSpec{};
    std::vector<LeadSpec> leads;
    std::optional<RotationParams> rotation;
    std::optional<TaskKind> task;
    std::optional<SweepSpec> sweep;
    std::optional<DiodeSpec> diode;
    std::optional<GyroSpec> gyro;
    std::optional<SymmetrySpec> symmetry;
    std::optional<ValidateSpec> validate;

    /// Scattering system described by the file, rotation applied.
    ScatteringSystem system() const;

    /// Ring with three leads on sites 1, 2, 3 sharing g and t.
    bool is_symmetric_three_ring() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json to_json(const Scenario& scenario);

/// Parses a number or an angle written as "[-][a]pi[/b]".
double parse_angle(const nlohmann::json& value, const std::string& where);

std::string_view to_string(TaskKind task);
std::string_view to_string(SweepParameter parameter);

}  // namespace ringflux::cli
