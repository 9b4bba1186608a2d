#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ringflux/negf.hpp"
#include "ringflux/random_system.hpp"
#include "test_support.hpp"

using namespace ringflux;
using std::numbers::pi;
using test_support::five_site_graph;
using test_support::three_ring;

namespace {

ScatteringSystem with_phases(const ScatteringSystem& s, double sign) {
    std::vector<Hopping> bonds(s.lattice().hoppings().begin(), s.lattice().hoppings().end());
    for (auto& b : bonds) {
        b.phase *= sign;
    }
    return {CentralLattice(s.lattice().size(), bonds,
                           std::vector<double>(s.lattice().onsite().begin(), s.lattice().onsite().end())),
            std::vector<LeadSpec>(s.leads().begin(), s.leads().end())};
}

}  // namespace

TEST(Negf, EffectiveHamiltonianAtDiodePoint) {
    const auto s = three_ring(1, 1, 1, 0, pi / 2);
    const ComplexMatrix h = assemble_h_eff(s, 0.0);
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_LT(std::abs(h(j, j) - Complex(0, 1)), 1e-15);
    }
    const auto sigma = lead_self_energies(s.leads(), 0.0);
    EXPECT_NEAR(sigma[0].gamma(), 2.0, 1e-15);
}

TEST(Negf, SelfEnergyOutsideBandThrows) {
    const auto s = three_ring(1, 1, 1, 0, 0.3);
    EXPECT_THROW(lead_self_energies(s.leads(), 2.5), std::domain_error);
    EXPECT_THROW(transmission(s, -3.0), std::domain_error);
}

TEST(Negf, FrozenGeneralGraph) {
    // independent dense-inverse evaluation
    const double expected[3][3] = {{0.0, 0.2353148602014413, 0.44324944553379664},
                                   {0.01164980601184965, 0.0, 0.3918616594649676},
                                   {0.6669144997233879, 0.16819660527537555, 0.0}};
    const double reflection[3] = {0.32143569426476204, 0.5964885345231827, 0.1648888950012366};
    const auto tm = transmission(five_site_graph(), 0.35);
    for (std::size_t p = 0; p < 3; ++p) {
        for (std::size_t q = 0; q < 3; ++q) {
            EXPECT_NEAR(tm(p, q), expected[p][q], 1e-12) << p << q;
        }
        EXPECT_NEAR(tm.reflection[p], reflection[p], 1e-12);
    }
}

TEST(Negf, CramerOracle) {
    const auto s = five_site_graph();
    const double energy = -0.6;
    const ComplexMatrix h = assemble_h_eff(s, energy);
    const Complex det = test_support::leibniz_determinant(h);
    const auto sigma = lead_self_energies(s.leads(), energy);
    const auto tm = transmission(s, energy);
    for (std::size_t p = 0; p < 3; ++p) {
        for (std::size_t q = 0; q < 3; ++q) {
            if (p == q) {
                continue;
            }
            const std::size_t sp = s.leads()[p].site;
            const std::size_t sq = s.leads()[q].site;
            // G_qp = cofactor(p, q) / det
            const double sign = (sp + sq) % 2 == 0 ? 1.0 : -1.0;
            const Complex g = sign * test_support::leibniz_determinant(test_support::minor_of(h, sp, sq)) / det;
            EXPECT_NEAR(tm(p, q), sigma[p].gamma() * sigma[q].gamma() * std::norm(g), 1e-12);
        }
    }
}

TEST(Negf, TraceFormulaMatchesReduction) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        const auto c = random_case(rng, {.per_lead_hopping = true});
        EXPECT_LE(max_deviation(transmission(c.system, c.energy), transmission_trace(c.system, c.energy)), 1e-12);
    }
}

TEST(Negf, UnitarityOnRandomSystems) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        const auto c = random_case(rng, {.per_lead_hopping = true});
        EXPECT_LE(transmission(c.system, c.energy).unitarity_defect(), 1e-10);
    }
}

TEST(Negf, ZeroFluxIsReciprocal) {
    const auto s = with_phases(five_site_graph(), 0.0);
    for (double e : {-1.2, 0.0, 0.35, 1.5}) {
        EXPECT_LE(transmission(s, e).max_asymmetry(), 1e-12);
    }
}

TEST(Negf, FluxReversalTransposes) {
    const auto s = five_site_graph();
    const auto r = with_phases(s, -1.0);
    for (double e : {-1.0, 0.2, 1.1}) {
        const auto a = transmission(s, e);
        const auto b = transmission(r, e);
        for (std::size_t p = 0; p < 3; ++p) {
            for (std::size_t q = 0; q < 3; ++q) {
                EXPECT_NEAR(a(p, q), b(q, p), 1e-12);
            }
        }
    }
}

TEST(Negf, GaugeInvariance) {
    const auto s = five_site_graph();
    const double theta[5] = {0.4, -1.7, 2.2, 0.9, -0.3};
    std::vector<Hopping> bonds(s.lattice().hoppings().begin(), s.lattice().hoppings().end());
    for (auto& b : bonds) {
        b.phase += theta[b.from] - theta[b.to];
    }
    const ScatteringSystem g(CentralLattice(5, bonds, {0.2, -0.5, 0.0, 0.7, -0.3}),
                             std::vector<LeadSpec>(s.leads().begin(), s.leads().end()));
    EXPECT_LE(max_deviation(transmission(s, 0.35), transmission(g, 0.35)), 1e-12);
}

TEST(Negf, RotationalCovarianceOfThreeRing) {
    const auto tm = transmission(three_ring(0.8, 1.1, 1.0, 0.3, 0.7), 0.4);
    for (std::size_t p = 0; p < 3; ++p) {
        for (std::size_t q = 0; q < 3; ++q) {
            EXPECT_NEAR(tm(p, q), tm((p + 1) % 3, (q + 1) % 3), 1e-12);
        }
    }
}

TEST(Negf, BandEdgeIsTotalReflection) {
    const auto s = three_ring(1, 1, 1, 0, pi / 2);
    for (double e : {-2.0, 2.0}) {
        const auto tm = transmission(s, e);
        EXPECT_TRUE(tm.band_edge);
        EXPECT_EQ(tm(0, 1), 0.0);
        EXPECT_EQ(tm.reflection[2], 1.0);
    }
}

TEST(Negf, SweepIsDeterministicAcrossThreadCounts) {
    const auto s = five_site_graph();
    std::vector<double> grid;
    for (int i = 0; i <= 200; ++i) {
        grid.push_back(-1.6 + 3.2 * i / 200.0);
    }
    const auto one = sweep(s, grid, 1);
    const auto four = sweep(s, grid, 4);
    ASSERT_EQ(one.size(), grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ASSERT_TRUE(one[i].result && four[i].result);
        EXPECT_EQ(one[i].energy, grid[i]);
        EXPECT_EQ(one[i].result->values, four[i].result->values);
    }
}

TEST(Negf, SweepGapsAndOrdering) {
    const auto s = five_site_graph();  // narrowest lead band is |E| < 1.6
    const std::vector<double> grid{0.0, 1.0, 1.7};
    const auto points = sweep(s, grid, 2);
    EXPECT_TRUE(points[1].result.has_value());
    EXPECT_FALSE(points[2].result.has_value());
    EXPECT_FALSE(points[2].error.empty());
    const std::vector<double> unsorted{0.5, 0.1};
    EXPECT_THROW(sweep(s, unsorted), std::invalid_argument);
}
