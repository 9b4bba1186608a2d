#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ringflux/complex_matrix.hpp"

namespace ringflux {

using SiteIndex = std::size_t;

/// Directed bond contributing -amplitude·e^{i·phase} to H(from, to) and the
/// conjugate to H(to, from).
struct Hopping {
    SiteIndex from = 0;
    SiteIndex to = 0;
    double amplitude = 1.0;
    double phase = 0.0;

    friend bool operator==(const Hopping&, const Hopping&) = default;
};

/// Tight-binding graph of the scattering region.
class CentralLattice {
public:
    /// Validates the bond list: indices in range, no self loops, each
    /// unordered site pair at most once, one onsite energy per site.
    CentralLattice(std::size_t n_sites, std::vector<Hopping> hoppings, std::vector<double> onsite);

    std::size_t size() const noexcept { return n_sites_; }
    std::span<const Hopping> hoppings() const noexcept { return hoppings_; }
    std::span<const double> onsite() const noexcept { return onsite_; }

    /// The Hermitian matrix H_C.
    ComplexMatrix hamiltonian() const;

    /// Neighbour lists of the undirected bond graph.
    std::vector<std::vector<SiteIndex>> adjacency() const;

    friend bool operator==(const CentralLattice&, const CentralLattice&) = default;

private:
    std::size_t n_sites_;
    std::vector<Hopping> hoppings_;
    std::vector<double> onsite_;
};

/// Semi-infinite uniform chain attached to `site` with coupling g.
struct LeadSpec {
    SiteIndex site = 0;
    double coupling = 1.0;  // g
    double hopping = 1.0;   // t, must be > 0

    friend bool operator==(const LeadSpec&, const LeadSpec&) = default;
};

/// Central lattice plus its ordered leads (at least two, one per site at most).
class ScatteringSystem {
public:
    ScatteringSystem(CentralLattice lattice, std::vector<LeadSpec> leads);

    const CentralLattice& lattice() const noexcept { return lattice_; }
    std::span<const LeadSpec> leads() const noexcept { return leads_; }
    std::size_t lead_count() const noexcept { return leads_.size(); }

    /// Index into leads() of the lead attached at `site`, if any.
    std::optional<std::size_t> lead_at(SiteIndex site) const;

    friend bool operator==(const ScatteringSystem&, const ScatteringSystem&) = default;

private:
    CentralLattice lattice_;
    std::vector<LeadSpec> leads_;
};

/// Ω and the geometry constant K of the rotation term -Ω·L_z.
struct RotationParams {
    double angular_velocity = 0.0;
    double geometry_constant = 0.0;

    friend bool operator==(const RotationParams&, const RotationParams&) = default;
};

enum class FluxDistribution { uniform, single_bond };

/// N-site ring with bonds j -> j+1 (and N-1 -> 0), amplitude J, uniform onsite
/// energy omega and the given total flux. `single_bond` puts all flux on the
/// closing bond N-1 -> 0.
ScatteringSystem ring_system(std::size_t n_sites, double hopping, double onsite, double total_flux,
                             FluxDistribution distribution, std::vector<LeadSpec> leads);

/// Site order of a ring whose bonds all point the same way around the cycle,
/// starting at site 0; nullopt for anything else.
std::optional<std::vector<SiteIndex>> directed_ring_order(const CentralLattice& lattice);

/// Adds the rotation term to every ring bond: J e^{iφ} -> (J + iΩK) e^{iφ}.
/// Throws std::invalid_argument unless the lattice is a directed ring.
ScatteringSystem apply_rotation(const ScatteringSystem& system, const RotationParams& rotation);

/// Peierls phase picked up hopping from `a` to `b` (π added for negative
/// amplitudes). Throws std::invalid_argument if the sites are not bonded.
double bond_phase(const CentralLattice& lattice, SiteIndex a, SiteIndex b);

/// Sum of bond phases along the closed walk cycle[0] -> cycle[1] -> ... -> cycle[0].
double cycle_flux(const CentralLattice& lattice, std::span<const SiteIndex> cycle);

/// Flux through each independent cycle (one per bond outside a BFS spanning
/// forest), unwrapped.
std::vector<double> fundamental_cycle_fluxes(const CentralLattice& lattice);

/// Maps an angle into (-π, π].
double wrap_phase(double phase);

enum class LeadRegime { propagating, band_edge, evanescent };

struct LeadMomentum {
    double k = 0.0;  // in (0, π) when propagating; 0 or π at a band edge; NaN otherwise
    LeadRegime regime = LeadRegime::propagating;
};

/// Relative tolerance under which |E| is taken to sit on the band edge 2t.
inline constexpr double band_edge_tolerance = 1e-12;

/// Solves E = -2t cos k for the lead wave number.
LeadMomentum lead_momentum(double energy, double lead_hopping);

/// Solves E = -2J cos q + omega on the principal arccos branch, Im q >= 0.
Complex ring_momentum(double energy, double hopping, double onsite);

}  // namespace ringflux
