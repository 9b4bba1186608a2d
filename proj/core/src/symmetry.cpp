#include "ringflux/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <numbers>
#include <sstream>

#include "ringflux/negf.hpp"

namespace ringflux {

BipartiteColoring bipartite_coloring(const CentralLattice& lattice) {
    const std::size_t n = lattice.size();
    const auto adj = lattice.adjacency();
    std::vector<int> color(n, -1);
    for (SiteIndex root = 0; root < n; ++root) {
        if (color[root] != -1) {
            continue;
        }
        color[root] = 0;
        std::deque<SiteIndex> queue{root};
        while (!queue.empty()) {
            const SiteIndex u = queue.front();
            queue.pop_front();
            for (SiteIndex v : adj[u]) {
                if (color[v] == -1) {
                    color[v] = 1 - color[u];
                    queue.push_back(v);
                } else if (color[v] == color[u]) {
                    return {};
                }
            }
        }
    }
    BipartiteColoring out;
    out.is_bipartite = true;
    out.color.reserve(n);
    for (int c : color) {
        out.color.push_back(c == 0 ? Sublattice::A : Sublattice::B);
        (c == 0 ? out.size_a : out.size_b) += 1;
    }
    return out;
}

std::string_view to_string(ReciprocityRule rule) {
    switch (rule) {
        case ReciprocityRule::zero_flux: return "zero_flux";
        case ReciprocityRule::band_edge: return "band_edge";
        case ReciprocityRule::bipartite_E0: return "bipartite_E0";
        case ReciprocityRule::bipartite_lead_placement: return "bipartite_lead_placement";
        case ReciprocityRule::none: return "none";
    }
    return "none";
}

namespace {

bool multiple_of_pi(double flux) {
    return std::abs(std::remainder(flux, std::numbers::pi)) <= reciprocity_match_tolerance;
}

bool resonant(const CentralLattice& lattice) {
    const auto onsite = lattice.onsite();
    return std::all_of(onsite.begin(), onsite.end(),
                       [](double w) { return std::abs(w) <= reciprocity_match_tolerance; });
}

}  // namespace

ReciprocityVerdict predict_reciprocity(const ScatteringSystem& system, double energy) {
    const CentralLattice& lattice = system.lattice();

    const auto fluxes = fundamental_cycle_fluxes(lattice);
    if (std::all_of(fluxes.begin(), fluxes.end(), multiple_of_pi)) {
        return {true, ReciprocityRule::zero_flux,
                fluxes.empty() ? "lattice has no cycles"
                               : "all cycle fluxes are multiples of pi (time-reversal symmetric)"};
    }

    const auto leads = system.leads();
    const bool all_edge = std::all_of(leads.begin(), leads.end(), [&](const LeadSpec& lead) {
        return lead_momentum(energy, lead.hopping).regime == LeadRegime::band_edge;
    });
    if (all_edge) {
        return {true, ReciprocityRule::band_edge,
                "injection at k = 0 or pi; transmission vanishes identically"};
    }

    const BipartiteColoring coloring = bipartite_coloring(lattice);
    if (!coloring.is_bipartite) {
        return {false, ReciprocityRule::none, "lattice is not bipartite"};
    }
    if (!resonant(lattice)) {
        return {false, ReciprocityRule::none, "bipartite but onsite energies are off resonance"};
    }
    if (std::abs(energy) <= reciprocity_match_tolerance) {
        return {true, ReciprocityRule::bipartite_E0, "bipartite lattice injected at E = 0"};
    }

    std::size_t leads_a = 0;
    std::size_t leads_b = 0;
    for (const auto& lead : leads) {
        (coloring.color[lead.site] == Sublattice::A ? leads_a : leads_b) += 1;
    }
    std::ostringstream detail;
    detail << "sublattice sizes (" << coloring.size_a << ", " << coloring.size_b << "), leads ("
           << leads_a << ", " << leads_b << ")";

    if (lattice.size() % 2 == 1) {
        const bool a_is_minority = coloring.size_a < coloring.size_b;
        const std::size_t on_minority = a_is_minority ? leads_a : leads_b;
        const std::size_t on_majority = a_is_minority ? leads_b : leads_a;
        // The two clauses of the odd-N condition are combined with AND; the OR
        // reading admits asymmetric counterexamples.
        if (on_minority == 0 && on_majority <= 2) {
            detail << "; odd N, no lead on the minority sublattice and at most two on the majority"
                      " (clauses combined with AND)";
            return {true, ReciprocityRule::bipartite_lead_placement, detail.str()};
        }
        detail << "; odd-N lead rule not met (clauses combined with AND)";
    } else {
        if (leads_a <= 1 && leads_b <= 1) {
            detail << "; even N, at most one lead per sublattice";
            return {true, ReciprocityRule::bipartite_lead_placement, detail.str()};
        }
        detail << "; even-N lead rule not met";
    }
    return {false, ReciprocityRule::none, detail.str()};
}

ReciprocityReport verify_reciprocity(const ScatteringSystem& system, std::span<const double> energies,
                                     double tolerance) {
    ReciprocityReport report;
    report.tolerance = tolerance;
    if (!energies.empty()) {
        report.verdict = predict_reciprocity(system, energies.front());
        report.worst_energy = energies.front();
    }
    for (double energy : energies) {
        const ReciprocityVerdict verdict = predict_reciprocity(system, energy);
        double deviation = 0.0;
        try {
            deviation = transmission(system, energy).max_asymmetry();
        } catch (const std::exception& e) {
            std::ostringstream note;
            note.precision(17);
            note << "E=" << energy << ": " << e.what();
            report.skipped.push_back(note.str());
            continue;
        }
        ++report.evaluated_points;
        if (deviation > report.max_deviation) {
            report.max_deviation = deviation;
            report.worst_energy = energy;
        }
        if (verdict.is_protected) {
            ++report.protected_points;
            report.max_protected_deviation = std::max(report.max_protected_deviation, deviation);
            if (deviation > tolerance) {
                report.consistent = false;
            }
        }
    }
    return report;
}

}  // namespace ringflux
