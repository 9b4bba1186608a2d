#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ringflux/lattice.hpp"

namespace ringflux {

enum class Sublattice { A, B };

struct BipartiteColoring {
    bool is_bipartite = false;
    std::vector<Sublattice> color;  // empty unless bipartite
    std::size_t size_a = 0;
    std::size_t size_b = 0;
};

/// BFS two-colouring; site 0 (and the first site of every further component)
/// gets colour A.
BipartiteColoring bipartite_coloring(const CentralLattice& lattice);

/// Structural reasons for T_pq = T_qp in the presence of flux, in the order
/// they are tested.
enum class ReciprocityRule { zero_flux, band_edge, bipartite_E0, bipartite_lead_placement, none };

std::string_view to_string(ReciprocityRule rule);

struct ReciprocityVerdict {
    bool is_protected = false;
    ReciprocityRule rule = ReciprocityRule::none;
    std::string detail;
};

/// Tolerances for the exact comparisons behind the rules (fluxes, E = 0,
/// resonance of the onsite energies).
inline constexpr double reciprocity_match_tolerance = 1e-12;

/// First matching structural rule, or `none` (which asserts nothing).
///
/// 1. zero_flux: every independent cycle flux is 0 or π mod 2π, so H_C is
///    gauge-equivalent to a real matrix.
/// 2. band_edge: every lead is injected at k = 0 or π.
/// 3. bipartite_E0: bipartite lattice, all onsite energies 0, E = 0.
/// 4. bipartite_lead_placement: bipartite, all onsite energies 0, and
///    odd N: no lead on the minority sublattice and at most two on the majority;
///    even N: at most one lead on each sublattice.
ReciprocityVerdict predict_reciprocity(const ScatteringSystem& system, double energy);

struct ReciprocityReport {
    ReciprocityVerdict verdict;  // at the first grid energy
    double max_deviation = 0.0;  // max over grid of ||T - Tᵀ||_max
    double worst_energy = 0.0;
    std::size_t evaluated_points = 0;
    std::size_t protected_points = 0;
    double max_protected_deviation = 0.0;
    std::vector<std::string> skipped;  // energies that could not be evaluated
    /// Protected verdicts must come with deviation <= tolerance; `none` always passes.
    bool consistent = true;
    double tolerance = 1e-10;
};

/// Evaluates ||T - Tᵀ||_max over the grid. The prediction is made at every
/// grid energy, since rules 2 and 3 depend on E.
ReciprocityReport verify_reciprocity(const ScatteringSystem& system, std::span<const double> energies,
                                     double tolerance = 1e-10);

}  // namespace ringflux
