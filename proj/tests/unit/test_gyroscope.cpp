#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ringflux/bethe.hpp"
#include "ringflux/gyroscope.hpp"
#include "ringflux/negf.hpp"
#include "test_support.hpp"

using namespace ringflux;
using std::numbers::pi;

TEST(Gyro, ResonantSlope) {
    const GyroParams p{1, 1, 1, 0};
    EXPECT_NEAR(linear_slope(p), 0.8, 1e-8);
    EXPECT_NEAR(printed_linear_coefficient(p), 0.8, 1e-12);
    const auto t0 = zero_flux_transmission(p);
    EXPECT_NEAR(t0.exact, 0.4, 1e-12);
    EXPECT_NEAR(t0.discrepancy, 0.0, 1e-12);
}

TEST(Gyro, DetunedSlopes) {
    // central differences of an independent dense-inverse evaluation
    EXPECT_NEAR(linear_slope({1, 1, 1, -0.8}), 1.6734049103295232, 1e-7);
    EXPECT_NEAR(linear_slope({1, 1, 1, 0.8}), 0.3647526393701916, 1e-7);
    const std::vector<double> omegas{-0.8, 0.0, 0.8};
    const auto scan = slope_scan({1, 1, 1, 0}, omegas);
    EXPECT_EQ(scan.best_omega, -0.8);
    EXPECT_EQ(scan.slope.size(), 3u);
}

TEST(Gyro, ExactZeroFluxTransmissionMatchesSolver) {
    const double t = 2.0;
    const GyroParams p{std::sqrt(t), t, 1.0, 0.3};
    const auto s = test_support::three_ring(p.g, p.t, p.J, p.omega, 0.0);
    const auto d = diode_coefficients(transmission(s, 0.0));
    const auto t0 = zero_flux_transmission(p);
    EXPECT_NEAR(t0.exact, d.T_R, 1e-12);
    EXPECT_GT(t0.discrepancy, 1e-3);
}

TEST(Gyro, ResponseIsOddAndSolversAgree) {
    const GyroParams p{1.2, 1.3, 1.0, 0.25};
    for (double phi : {0.01, 0.2, 0.9, 2.0}) {
        const double a = delta_at(p, phi);
        EXPECT_NEAR(delta_at(p, -phi), -a, 1e-12);
        EXPECT_NEAR(delta_at(p, phi, 0.0, DeltaSolver::negf), a, 1e-10);
        EXPECT_NEAR(delta_at(p, phi, 0.3, DeltaSolver::negf), delta_at(p, phi, 0.3), 1e-10);
    }
    EXPECT_NEAR(delta_at(p, 0.0), 0.0, 1e-14);
}

TEST(Gyro, CompensatingFluxCancels) {
    const GyroParams p{1, 1, 1, 0};
    EXPECT_NEAR(delta_at(p, 1.3, -1.3), 0.0, 1e-12);
    EXPECT_NEAR(delta_at(p, 1.3, -1.2), delta_at(p, 0.1), 1e-12);
}

TEST(Gyro, ResponseCurve) {
    const std::vector<double> grid{-0.1, 0.0, 0.1};
    const auto c = delta_response({1, 1, 1, 0}, grid);
    ASSERT_EQ(c.delta.size(), 3u);
    EXPECT_NEAR(c.delta[2], -c.delta[0], 1e-14);
    EXPECT_NEAR(c.delta[2] / 0.1, 0.8, 0.01);
}

TEST(Gyro, RotationCalibrationRoundTrip) {
    const double J = 1.0;
    const double K = 1.0;
    const double omega_rot = 0.01;
    const RotationParams rot{omega_rot, K};
    EXPECT_NEAR(rotation_to_flux(rot, J, 0.2, 3), 0.2 + 3 * std::atan(0.01), 1e-15);
    const auto s = apply_rotation(test_support::three_ring(1, 1, J, 0, 0), rot);
    const auto d = diode_coefficients(transmission(s, 0.0));
    const double recovered = angular_velocity_from_delta(d.T_R - d.T_L, linear_slope({1, 1, J, 0}), K, J, 3);
    EXPECT_NEAR(recovered, omega_rot, 0.01 * omega_rot);
}

TEST(Gyro, TrapezoidIntegration) {
    std::vector<double> times;
    std::vector<double> omega;
    const int n = 10001;
    for (int i = 0; i < n; ++i) {
        times.push_back(pi * i / (n - 1));
        omega.push_back(std::sin(times.back()));
    }
    const auto trace = integrate_angle(times, omega);
    EXPECT_NEAR(trace.final_angle(), 4 * pi, 1e-6);
    EXPECT_EQ(trace.integrated_angle.front(), 0.0);

    const std::vector<double> bad_times{0.0, 1.0, 0.5};
    const std::vector<double> three{1, 1, 1};
    const std::vector<double> two{1, 1};
    EXPECT_THROW(integrate_angle(bad_times, three), std::invalid_argument);
    EXPECT_THROW(integrate_angle(bad_times, two), std::invalid_argument);
}
