#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ringflux/bethe.hpp"
#include "ringflux/negf.hpp"
#include "ringflux/random_system.hpp"
#include "test_support.hpp"

using namespace ringflux;
using std::numbers::pi;
using test_support::five_site_graph;
using test_support::three_ring;

TEST(Bethe, IdenticalLeadsGiveTheTextbookSystem) {
    const auto s = ring_system(5, 1.0, 0.2, 0.9, FluxDistribution::uniform, {{0, 0.8, 1.2}, {2, 0.8, 1.2}, {3, 0.8, 1.2}});
    const double energy = 0.7;
    const double k = lead_momentum(energy, 1.2).k;
    const ComplexMatrix hc = s.lattice().hamiltonian();
    for (std::size_t p = 0; p < 3; ++p) {
        const auto sys = bethe_linear_system(s, p, energy);
        EXPECT_LE(max_abs_diff(sys.matrix, assemble_h_eff(s, energy)), 1e-14);
        const std::size_t sp = s.leads()[p].site;
        for (std::size_t j = 0; j < 5; ++j) {
            Complex w = hc(j, sp);
            if (j == sp) {
                w -= energy + (0.8 * 0.8 / 1.2) * std::polar(1.0, -k);
            }
            EXPECT_LT(std::abs(sys.rhs[j] - w), 1e-14) << p << j;
        }
    }
}

TEST(Bethe, SolutionsSatisfySchrodinger) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
        const auto c = random_case(rng, {.per_lead_hopping = true});
        for (std::size_t p = 0; p < c.system.lead_count(); ++p) {
            EXPECT_LE(schrodinger_residual(c.system, solve_scattering(c.system, p, c.energy)), 1e-10);
        }
    }
}

TEST(Bethe, AgreesWithGreensFunction) {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 200; ++i) {
        const auto c = random_case(rng, {.per_lead_hopping = i % 2 == 0});
        EXPECT_LE(max_deviation(bethe_transmission(c.system, c.energy), transmission(c.system, c.energy)), 1e-10);
    }
    const auto s = five_site_graph();
    EXPECT_LE(max_deviation(bethe_transmission(s, 0.35), transmission(s, 0.35)), 1e-12);
    EXPECT_NEAR(bethe_transmission(s, 0.35)(2, 0), 0.6669144997233879, 1e-12);
}

TEST(Bethe, DecoupledLeadReflectsEverything) {
    const auto s = ring_system(4, 1.0, 0.0, 0.5, FluxDistribution::uniform, {{0, 0.0, 1.0}, {2, 1.0, 1.0}});
    const auto sol = solve_scattering(s, 0, 0.3);
    EXPECT_LT(std::abs(sol.lead_amplitudes[0] + 1.0), 1e-15);
    EXPECT_NEAR(sol.reflection(), 1.0, 1e-15);
    EXPECT_LE(max_deviation(bethe_transmission(s, 0.3), transmission(s, 0.3)), 1e-12);
}

TEST(Bethe, BandEdgeAndOutsideBand) {
    const auto s = three_ring(1, 1, 1, 0, pi / 2);
    const auto sol = solve_scattering(s, 1, 2.0);
    EXPECT_TRUE(sol.band_edge);
    EXPECT_NEAR(sol.reflection(), 1.0, 1e-15);
    EXPECT_THROW(solve_scattering(s, 0, 2.5), std::domain_error);
}

TEST(Bethe, LeadWavefunction) {
    const auto s = five_site_graph();
    const auto sol = solve_scattering(s, 1, 0.35);
    const double k = sol.lead_momenta[1];
    const Complex expected = sol.lead_amplitudes[1] * std::polar(1.0, 3 * k) + std::polar(1.0, -3 * k);
    EXPECT_LT(std::abs(sol.lead_wavefunction(1, 3) - expected), 1e-14);
    EXPECT_LT(std::abs(sol.lead_wavefunction(0, 2) - sol.lead_amplitudes[0] * std::polar(1.0, 2 * sol.lead_momenta[0])),
              1e-14);
}

TEST(ClosedForm, GenericPointMatchesIndependentInverse) {
    const auto cf = closed_form_3site(ClosedForm3Site::at_energy(0.8, 1.1, 1.0, 0.3, 0.7, 0.4));
    EXPECT_NEAR(cf.T_R, 0.4498456320781388, 1e-12);
    EXPECT_NEAR(cf.T_L, 0.12997668591222244, 1e-12);
    EXPECT_NEAR(cf.R, 0.4201776820096388, 1e-12);
    EXPECT_NEAR(cf.T_R + cf.T_L + cf.R, 1.0, 1e-12);
}

TEST(ClosedForm, DiodePoint) {
    const auto cf = closed_form_3site({1, 1, 1, 0, pi / 2, pi / 2});
    EXPECT_NEAR(cf.T_R, 1.0, 1e-12);
    EXPECT_NEAR(cf.T_L, 0.0, 1e-12);
    EXPECT_NEAR(cf.R, 0.0, 1e-12);
}

TEST(ClosedForm, FluxReversalSwapsDirections) {
    for (double flux : {0.3, 1.2, 2.5}) {
        const auto a = closed_form_3site(ClosedForm3Site::at_energy(0.9, 1.0, 1.2, -0.4, flux, -0.5));
        const auto b = closed_form_3site(ClosedForm3Site::at_energy(0.9, 1.0, 1.2, -0.4, -flux, -0.5));
        EXPECT_NEAR(a.T_R, b.T_L, 1e-12);
        EXPECT_NEAR(a.T_L, b.T_R, 1e-12);
        EXPECT_NEAR(a.R, b.R, 1e-12);
    }
}

TEST(ClosedForm, AgreesWithBothSolvers) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const ClosedForm3Site p{0.3 + u(rng), 0.5 + u(rng), 0.5 + u(rng), 2 * u(rng) - 1, 2 * pi * u(rng) - pi,
                                0.05 + 3.0 * u(rng)};
        const auto cf = closed_form_3site(p);
        const auto negf = diode_coefficients(transmission(p.system(), p.energy()));
        const auto bethe = diode_coefficients(bethe_transmission(p.system(), p.energy()));
        EXPECT_NEAR(cf.T_R, negf.T_R, 1e-10);
        EXPECT_NEAR(cf.T_L, negf.T_L, 1e-10);
        EXPECT_NEAR(cf.R, bethe.R, 1e-10);
    }
}

TEST(ClosedForm, BandEdgeConvention) {
    for (double k : {0.0, pi}) {
        const auto cf = closed_form_3site({1, 1, 1, 0, pi / 3, k});
        EXPECT_EQ(cf.T_R, 0.0);
        EXPECT_EQ(cf.T_L, 0.0);
        EXPECT_EQ(cf.R, 1.0);
    }
}

TEST(Arcs, ReconstructRingAmplitudes) {
    const double J = 1.0;
    const double omega = 0.1;
    const auto s = ring_system(7, J, omega, 1.1, FluxDistribution::uniform, {{0, 0.9, 1.0}, {2, 0.9, 1.0}, {3, 0.9, 1.0}});
    const double energy = 0.45;
    const auto sol = solve_scattering(s, 0, energy);
    ASSERT_TRUE(sol.ring_momentum.has_value());
    const double q = sol.ring_momentum->real();
    EXPECT_NEAR(-2 * J * std::cos(q) + omega, energy, 1e-12);
    const auto arcs = arc_amplitudes(s, sol);
    ASSERT_EQ(arcs.size(), 3u);
    const std::size_t lengths[3] = {2, 1, 4};
    for (std::size_t a = 0; a < 3; ++a) {
        EXPECT_EQ(arcs[a].length, lengths[a]);
        const std::size_t start = s.leads()[a].site;
        double accumulated = 0.0;
        for (std::size_t j = 1; j <= arcs[a].length + 1; ++j) {
            const std::size_t site = (start + j - 1) % 7;
            const Complex psi = arcs[a].forward * std::polar(1.0, q * j - accumulated) +
                                arcs[a].backward * std::polar(1.0, -(q * j + accumulated));
            EXPECT_LT(std::abs(psi - sol.site_amplitudes[site]), 1e-10) << a << ' ' << j;
            accumulated += bond_phase(s.lattice(), site, (site + 1) % 7);
        }
    }
}
