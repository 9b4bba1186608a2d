#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ringflux/lattice.hpp"

namespace ringflux {

/// Three-site ring read out at E = 0 (k = π/2).
struct GyroParams {
    double g = 1.0;
    double t = 1.0;
    double J = 1.0;
    double omega = 0.0;
};

enum class DeltaSolver { closed_form, negf };

/// Δ = T_R - T_L sampled against the rotation-induced flux Φ_Ω.
struct ResponseCurve {
    std::vector<double> abscissa;
    std::vector<double> delta;
    GyroParams params;
    double static_flux = 0.0;
};

/// Δ at E = 0 for total ring flux `static_flux + Φ_Ω`. The negf route puts
/// Φ_Ω uniformly on the bonds and the static flux on the closing bond.
double delta_at(const GyroParams& params, double rotation_flux, double static_flux = 0.0,
                DeltaSolver solver = DeltaSolver::closed_form);

ResponseCurve delta_response(const GyroParams& params, std::span<const double> flux_grid,
                             double static_flux = 0.0, DeltaSolver solver = DeltaSolver::closed_form);

/// Zero-flux transmission at E = 0: the printed analytic expression next to
/// the exact closed-form value.
struct ZeroFluxTransmission {
    double printed = 0.0;
    double exact = 0.0;
    double discrepancy = 0.0;  // |printed - exact|
};

ZeroFluxTransmission zero_flux_transmission(const GyroParams& params);

/// The printed small-flux coefficient 4Jtg²T(ω)/(g⁴ + t⁴(ω+J)²), kept only
/// for comparison reports.
double printed_linear_coefficient(const GyroParams& params);

/// dΔ/dΦ_Ω at 0: central difference with h = 1e-4 rad, one Richardson step.
double linear_slope(const GyroParams& params);

struct SlopeScan {
    std::vector<double> omega;
    std::vector<double> slope;
    double best_omega = 0.0;
    double best_slope = 0.0;
};

/// linear_slope over a grid of onsite energies; reports the maximum.
SlopeScan slope_scan(const GyroParams& params, std::span<const double> omega_grid);

/// Φ + N·arctan(ΩK/J).
double rotation_to_flux(const RotationParams& rotation, double J, double static_flux,
                        std::size_t n_sites);

/// Linear-window inversion Ω = Δ / (slope · N·K/J).
double angular_velocity_from_delta(double delta, double slope, double geometry_constant, double J,
                                   std::size_t n_sites);

/// Cumulative rotation angle θ(τ) = 2π ∫₀^τ Ω dt by the trapezoidal rule.
struct AngularTrace {
    std::vector<double> times;
    std::vector<double> omega_samples;
    std::vector<double> integrated_angle;

    double final_angle() const { return integrated_angle.empty() ? 0.0 : integrated_angle.back(); }
};

/// Throws std::invalid_argument for mismatched lengths or decreasing times.
AngularTrace integrate_angle(std::span<const double> times, std::span<const double> omega);

}  // namespace ringflux
