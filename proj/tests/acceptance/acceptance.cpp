#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ringflux/bethe.hpp"
#include "ringflux/gyroscope.hpp"
#include "ringflux/negf.hpp"
#include "ringflux/random_system.hpp"
#include "ringflux/symmetry.hpp"

using namespace ringflux;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

ScatteringSystem three_ring(double g, double t, double J, double omega, double flux) {
    return ring_system(3, J, omega, flux, FluxDistribution::uniform, {{0, g, t}, {1, g, t}, {2, g, t}});
}

double coefficient_error(const DiodeCoefficients& d, double tr, double tl, double r) {
    return std::max({std::abs(d.T_R - tr), std::abs(d.T_L - tl), std::abs(d.R - r)});
}

// Largest error of (T_R, T_L, R) against the target from both solvers.
double both_solvers_error(const ScatteringSystem& s, double energy, double tr, double tl, double r) {
    return std::max(coefficient_error(diode_coefficients(transmission(s, energy)), tr, tl, r),
                    coefficient_error(diode_coefficients(bethe_transmission(s, energy)), tr, tl, r));
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

std::vector<double> interior_band(double t, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = -2 * t + 4 * t * static_cast<double>(i + 1) / static_cast<double>(n + 1);
    }
    return v;
}

Outcome perfect_diode() {
    const double err = both_solvers_error(three_ring(1, 1, 1, 0, pi / 2), 0.0, 1, 0, 0);
    // g²/t = J with t != J as well
    const double err2 = both_solvers_error(three_ring(std::sqrt(0.5), 0.5, 1, 0, pi / 2), 0.0, 1, 0, 0);
    const double worst = std::max(err, err2);
    return {worst <= 1e-10, fmt("max |(T_R,T_L,R) - (1,0,0)| = %.3g", worst)};
}

Outcome tunable_diode() {
    const double flux = pi / 3;
    const double t = 1.0;
    const double e_forward = -2 * t * std::cos(pi - flux);
    const double forward = both_solvers_error(three_ring(1, t, 1, 0, flux), e_forward, 1, 0, 0);
    // k = Φ - π is negative: closed form evaluated literally, plus the physical mirror Φ -> -Φ
    const double literal = coefficient_error(closed_form_3site({1, t, 1, 0, flux, flux - pi}), 0, 1, 0);
    const double mirror = both_solvers_error(three_ring(1, t, 1, 0, -flux), e_forward, 0, 1, 0);
    double edges = 0.0;
    for (double e : {-2 * t, 2 * t}) {
        edges = std::max(edges, both_solvers_error(three_ring(1, t, 1, 0, flux), e, 0, 0, 1));
    }
    for (double k : {0.0, pi}) {
        edges = std::max(edges, coefficient_error(closed_form_3site({1, t, 1, 0, flux, k}), 0, 0, 1));
    }
    const double worst = std::max({forward, literal, mirror, edges});
    return {worst <= 1e-10,
            fmt("E=t: %.3g; k=Phi-pi: %.3g (mirror %.3g)", forward, std::max(literal, mirror), mirror) +
                fmt("; band edges: %.3g", edges)};
}

Outcome diode_plateau() {
    const double t = 0.5;
    const auto s = three_ring(std::sqrt(t), t, 1, 0, pi / 2);
    double min_tr = 1.0;
    double max_tl = 0.0;
    double reduced = 0.0;
    for (double e : linspace(-t, t, 101)) {
        const auto d = diode_coefficients(transmission(s, e));
        min_tr = std::min(min_tr, d.T_R);
        max_tl = std::max(max_tl, d.T_L);
        const double sk = std::sin(lead_momentum(e, t).k);
        reduced = std::max(reduced, std::abs(d.T_R - 4 * (1 + sk) * (1 + sk) / ((3 + sk * sk) * (3 + sk * sk))));
    }
    return {min_tr >= 0.99 && max_tl <= 0.006 && reduced <= 1e-10,
            fmt("min T_R = %.6f, max T_L = %.6f, reduced-form error %.3g", min_tr, max_tl, reduced)};
}

Outcome small_t_limit() {
    const double t = 1e-3;
    const auto d = diode_coefficients(transmission(three_ring(t, t, 1, 0, pi / 2), 0.0));
    const auto b = diode_coefficients(bethe_transmission(three_ring(t, t, 1, 0, pi / 2), 0.0));
    const double err = std::max({std::abs(d.T_R - 4.0 / 9), std::abs(d.T_L - 4.0 / 9), std::abs(b.T_R - 4.0 / 9),
                                 std::abs(b.T_L - 4.0 / 9)});
    return {err <= 1e-3, fmt("T_R = %.6f, T_L = %.6f, max |T - 4/9| = %.3g", d.T_R, d.T_L, err)};
}

Outcome resonance_optimum() {
    const auto grid = linspace(-3, 3, 121);
    double best = -1.0;
    double best_omega = 0.0;
    for (double w : grid) {
        const auto d = diode_coefficients(transmission(three_ring(1, 1, 1, w, pi / 2), 0.0));
        if (d.T_R - d.T_L > best) {
            best = d.T_R - d.T_L;
            best_omega = w;
        }
    }
    const double step = grid[1] - grid[0];
    return {std::abs(best_omega) <= step, fmt("argmax omega = %.3f (step %.3f), contrast %.6f", best_omega, step, best)};
}

struct EnsembleStats {
    double deviation = 0.0;
    double unitarity = 0.0;
};

const EnsembleStats& random_ensemble() {
    static const EnsembleStats stats = [] {
        EnsembleStats s;
        std::mt19937_64 rng(2024);
        for (int i = 0; i < 200; ++i) {
            const auto c = random_case(rng, {.per_lead_hopping = i % 2 == 1});
            const auto g = transmission(c.system, c.energy);
            const auto b = bethe_transmission(c.system, c.energy);
            s.deviation = std::max(s.deviation, max_deviation(g, b));
            s.unitarity = std::max({s.unitarity, g.unitarity_defect(), b.unitarity_defect()});
        }
        return s;
    }();
    return stats;
}

Outcome dual_solver() {
    const double d = random_ensemble().deviation;
    return {d <= 1e-10, fmt("200 random systems, max |T_bethe - T_negf| = %.3g", d)};
}

Outcome unitarity() {
    const double u = random_ensemble().unitarity;
    return {u <= 1e-10, fmt("200 random systems, max |R_p + sum_q T_pq - 1| = %.3g", u)};
}

Outcome reciprocity_suite() {
    double zero_flux = 0.0;
    std::mt19937_64 rng(77);
    for (int i = 0; i < 50; ++i) {
        const auto c = random_case(rng);
        std::vector<Hopping> bonds(c.system.lattice().hoppings().begin(), c.system.lattice().hoppings().end());
        for (auto& b : bonds) {
            b.phase = 0.0;
        }
        const ScatteringSystem s(
            CentralLattice(c.system.lattice().size(), bonds,
                           {c.system.lattice().onsite().begin(), c.system.lattice().onsite().end()}),
            {c.system.leads().begin(), c.system.leads().end()});
        zero_flux = std::max(zero_flux, transmission(s, c.energy).max_asymmetry());
    }

    double four_e0 = 0.0;
    for (double flux : linspace(-3.0, 3.0, 13)) {
        const auto s = ring_system(4, 1, 0, flux, FluxDistribution::uniform, {{0, 1, 1}, {1, 0.8, 1.2}, {2, 1.1, 0.9}});
        four_e0 = std::max(four_e0, transmission(s, 0.0).max_asymmetry());
    }

    const auto placed = ring_system(4, 1, 0, pi / 2, FluxDistribution::uniform, {{0, 1, 1}, {1, 1, 1}});
    const auto report = verify_reciprocity(placed, interior_band(1.0, 21));

    const double witness = transmission(three_ring(1, 1, 1, 0, pi / 2), 0.0).max_asymmetry();

    const bool pass = zero_flux <= 1e-12 && four_e0 <= 1e-10 && report.max_deviation <= 1e-10 &&
                      report.protected_points == 21 && std::abs(witness - 1.0) <= 1e-10;
    return {pass, fmt("(a) %.3g (b) %.3g (c) %.3g", zero_flux, four_e0, report.max_deviation) +
                      fmt(" (d) deviation %.12f", witness)};
}

Outcome gyroscope_response() {
    const double J = 1.0;
    const double t = 1.0;
    const GyroParams p{std::sqrt(J * t), t, J, 0.0};
    const double at_zero = std::abs(delta_at(p, 0.0, 0.0, DeltaSolver::negf));
    double oddness = 0.0;
    for (double phi : linspace(0.01, pi, 60)) {
        oddness = std::max(oddness, std::abs(delta_at(p, phi, 0.0, DeltaSolver::negf) +
                                             delta_at(p, -phi, 0.0, DeltaSolver::negf)));
    }
    const double slope0 = linear_slope(p);
    double linearity = 0.0;
    for (double phi : linspace(-0.1, 0.1, 41)) {
        if (phi == 0.0) {
            continue;
        }
        const double exact = delta_at(p, phi, 0.0, DeltaSolver::negf);
        linearity = std::max(linearity, std::abs(exact - slope0 * phi) / std::abs(slope0 * phi));
    }
    const double slope_detuned = linear_slope({p.g, p.t, p.J, -0.8 * J});
    const bool pass = at_zero <= 1e-12 && oddness <= 1e-10 && linearity <= 0.01 && slope_detuned > slope0;
    return {pass, fmt("delta(0) = %.3g, oddness %.3g, linearity %.3g", at_zero, oddness, linearity) +
                      fmt("; slope(omega=-0.8J) = %.6f > slope(0) = %.6f", slope_detuned, slope0)};
}

Outcome gauge_invariance() {
    double worst = 0.0;
    for (std::size_t n : {3u, 4u, 6u}) {
        for (double flux : {0.4, 1.1, -2.7}) {
            const std::vector<LeadSpec> leads{{0, 1, 1}, {1, 0.9, 1}, {n - 1, 1.2, 1}};
            const auto u = ring_system(n, 1, 0.1, flux, FluxDistribution::uniform, leads);
            const auto b = ring_system(n, 1, 0.1, flux, FluxDistribution::single_bond, leads);
            for (double e : interior_band(1.0, 21)) {
                worst = std::max(worst, max_deviation(transmission(u, e), transmission(b, e)));
            }
        }
    }
    return {worst <= 1e-12, fmt("max |T_uniform - T_single_bond| = %.3g", worst)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"perfect diode point", perfect_diode},
        {"tunable diode", tunable_diode},
        {"wide diode plateau", diode_plateau},
        {"small-t limit", small_t_limit},
        {"resonance optimum", resonance_optimum},
        {"dual-solver equivalence", dual_solver},
        {"unitarity", unitarity},
        {"reciprocity suite", reciprocity_suite},
        {"gyroscope response", gyroscope_response},
        {"gauge invariance", gauge_invariance},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
