#include "ringflux/gyroscope.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ringflux/bethe.hpp"
#include "ringflux/negf.hpp"

namespace ringflux {

namespace {

constexpr double slope_step = 1e-4;

ScatteringSystem gyro_ring(const GyroParams& p, double rotation_flux, double static_flux) {
    std::vector<Hopping> bonds;
    for (std::size_t j = 0; j < 3; ++j) {
        bonds.push_back({j, (j + 1) % 3, p.J, rotation_flux / 3.0});
    }
    bonds.back().phase += static_flux;
    return ScatteringSystem(CentralLattice(3, std::move(bonds), std::vector<double>(3, p.omega)),
                            {{0, p.g, p.t}, {1, p.g, p.t}, {2, p.g, p.t}});
}

}  // namespace

double delta_at(const GyroParams& params, double rotation_flux, double static_flux, DeltaSolver solver) {
    if (solver == DeltaSolver::negf) {
        const auto d = diode_coefficients(transmission(gyro_ring(params, rotation_flux, static_flux), 0.0));
        return d.T_R - d.T_L;
    }
    const ClosedForm3Site cf{params.g, params.t, params.J, params.omega, static_flux + rotation_flux,
                             std::numbers::pi / 2.0};
    const auto d = closed_form_3site(cf);
    return d.T_R - d.T_L;
}

ResponseCurve delta_response(const GyroParams& params, std::span<const double> flux_grid,
                             double static_flux, DeltaSolver solver) {
    ResponseCurve curve;
    curve.params = params;
    curve.static_flux = static_flux;
    curve.abscissa.assign(flux_grid.begin(), flux_grid.end());
    curve.delta.reserve(flux_grid.size());
    for (double phi : flux_grid) {
        curve.delta.push_back(delta_at(params, phi, static_flux, solver));
    }
    return curve;
}

ZeroFluxTransmission zero_flux_transmission(const GyroParams& p) {
    const double g4 = std::pow(p.g, 4);
    const double t2 = p.t * p.t;
    const double printed = 4.0 * g4 * p.J * p.J * t2 /
                           ((g4 + t2 * std::pow(p.omega - 2.0 * p.J, 2)) *
                            (g4 + t2 * t2 * std::pow(p.omega + p.J, 2)));
    const ClosedForm3Site cf{p.g, p.t, p.J, p.omega, 0.0, std::numbers::pi / 2.0};
    const double exact = closed_form_3site(cf).T_R;
    return {printed, exact, std::abs(printed - exact)};
}

double printed_linear_coefficient(const GyroParams& p) {
    const double g4 = std::pow(p.g, 4);
    const double t4 = std::pow(p.t, 4);
    return 4.0 * p.J * p.t * p.g * p.g * zero_flux_transmission(p).printed /
           (g4 + t4 * std::pow(p.omega + p.J, 2));
}

double linear_slope(const GyroParams& params) {
    auto central = [&](double h) {
        return (delta_at(params, h) - delta_at(params, -h)) / (2.0 * h);
    };
    const double coarse = central(slope_step);
    const double fine = central(slope_step / 2.0);
    return (4.0 * fine - coarse) / 3.0;
}

SlopeScan slope_scan(const GyroParams& params, std::span<const double> omega_grid) {
    SlopeScan scan;
    for (double w : omega_grid) {
        GyroParams p = params;
        p.omega = w;
        const double s = linear_slope(p);
        scan.omega.push_back(w);
        scan.slope.push_back(s);
        if (scan.slope.size() == 1 || s > scan.best_slope) {
            scan.best_slope = s;
            scan.best_omega = w;
        }
    }
    return scan;
}

double rotation_to_flux(const RotationParams& rotation, double J, double static_flux,
                        std::size_t n_sites) {
    const double phi_omega = std::atan2(rotation.angular_velocity * rotation.geometry_constant, J);
    return static_flux + static_cast<double>(n_sites) * phi_omega;
}

double angular_velocity_from_delta(double delta, double slope, double geometry_constant, double J,
                                   std::size_t n_sites) {
    const double gain = slope * static_cast<double>(n_sites) * geometry_constant / J;
    if (gain == 0.0) {
        throw std::invalid_argument("zero gain: slope, K and N must be non-zero");
    }
    return delta / gain;
}

AngularTrace integrate_angle(std::span<const double> times, std::span<const double> omega) {
    if (times.size() != omega.size()) {
        throw std::invalid_argument("time and angular-velocity samples differ in length");
    }
    AngularTrace trace;
    trace.times.assign(times.begin(), times.end());
    trace.omega_samples.assign(omega.begin(), omega.end());
    trace.integrated_angle.reserve(times.size());
    double theta = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i > 0) {
            const double dt = times[i] - times[i - 1];
            if (!(dt >= 0.0)) {
                throw std::invalid_argument("time samples must be non-decreasing");
            }
            theta += std::numbers::pi * dt * (omega[i] + omega[i - 1]);
        }
        trace.integrated_angle.push_back(theta);
    }
    return trace;
}

}  // namespace ringflux
