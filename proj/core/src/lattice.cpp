#include "ringflux/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace ringflux {

CentralLattice::CentralLattice(std::size_t n_sites, std::vector<Hopping> hoppings,
                               std::vector<double> onsite)
    : n_sites_(n_sites), hoppings_(std::move(hoppings)), onsite_(std::move(onsite)) {
    if (n_sites_ == 0) {
        throw std::invalid_argument("lattice needs at least one site");
    }
    if (onsite_.size() != n_sites_) {
        throw std::invalid_argument("onsite energy list has " + std::to_string(onsite_.size()) +
                                    " entries for " + std::to_string(n_sites_) + " sites");
    }
    std::set<std::pair<SiteIndex, SiteIndex>> seen;
    for (const auto& h : hoppings_) {
        if (h.from >= n_sites_ || h.to >= n_sites_) {
            throw std::invalid_argument("hopping references a site outside the lattice");
        }
        if (h.from == h.to) {
            throw std::invalid_argument("hopping must connect two different sites");
        }
        if (!std::isfinite(h.amplitude) || !std::isfinite(h.phase)) {
            throw std::invalid_argument("hopping amplitude and phase must be finite");
        }
        if (!seen.insert(std::minmax(h.from, h.to)).second) {
            throw std::invalid_argument("duplicate hopping between sites " +
                                        std::to_string(h.from + 1) + " and " +
                                        std::to_string(h.to + 1));
        }
    }
}

ComplexMatrix CentralLattice::hamiltonian() const {
    ComplexMatrix h(n_sites_, n_sites_);
    for (std::size_t j = 0; j < n_sites_; ++j) {
        h(j, j) = onsite_[j];
    }
    for (const auto& b : hoppings_) {
        const Complex element = -b.amplitude * std::polar(1.0, b.phase);
        h(b.from, b.to) += element;
        h(b.to, b.from) += std::conj(element);
    }
    return h;
}

std::vector<std::vector<SiteIndex>> CentralLattice::adjacency() const {
    std::vector<std::vector<SiteIndex>> adj(n_sites_);
    for (const auto& b : hoppings_) {
        adj[b.from].push_back(b.to);
        adj[b.to].push_back(b.from);
    }
    return adj;
}

ScatteringSystem::ScatteringSystem(CentralLattice lattice, std::vector<LeadSpec> leads)
    : lattice_(std::move(lattice)), leads_(std::move(leads)) {
    if (leads_.size() < 2) {
        throw std::invalid_argument("a scattering system needs at least two leads");
    }
    std::set<SiteIndex> sites;
    for (const auto& lead : leads_) {
        if (lead.site >= lattice_.size()) {
            throw std::invalid_argument("lead attached to site " + std::to_string(lead.site + 1) +
                                        " outside the lattice");
        }
        if (!(lead.hopping > 0.0) || !std::isfinite(lead.hopping)) {
            throw std::invalid_argument("lead hopping t must be positive");
        }
        if (!std::isfinite(lead.coupling)) {
            throw std::invalid_argument("lead coupling g must be finite");
        }
        if (!sites.insert(lead.site).second) {
            throw std::invalid_argument("more than one lead on site " +
                                        std::to_string(lead.site + 1));
        }
    }
}

std::optional<std::size_t> ScatteringSystem::lead_at(SiteIndex site) const {
    for (std::size_t l = 0; l < leads_.size(); ++l) {
        if (leads_[l].site == site) {
            return l;
        }
    }
    return std::nullopt;
}

ScatteringSystem ring_system(std::size_t n_sites, double hopping, double onsite, double total_flux,
                             FluxDistribution distribution, std::vector<LeadSpec> leads) {
    if (n_sites < 3) {
        throw std::invalid_argument("a ring needs at least 3 sites");
    }
    if (!(hopping > 0.0)) {
        throw std::invalid_argument("ring hopping J must be positive");
    }
    std::vector<Hopping> bonds;
    bonds.reserve(n_sites);
    for (std::size_t j = 0; j < n_sites; ++j) {
        double phase = 0.0;
        if (distribution == FluxDistribution::uniform) {
            phase = total_flux / static_cast<double>(n_sites);
        } else if (j == n_sites - 1) {
            phase = total_flux;
        }
        bonds.push_back({j, (j + 1) % n_sites, hopping, phase});
    }
    CentralLattice lattice(n_sites, std::move(bonds), std::vector<double>(n_sites, onsite));
    return ScatteringSystem(std::move(lattice), std::move(leads));
}

std::optional<std::vector<SiteIndex>> directed_ring_order(const CentralLattice& lattice) {
    const std::size_t n = lattice.size();
    if (n < 3 || lattice.hoppings().size() != n) {
        return std::nullopt;
    }
    constexpr auto none = std::numeric_limits<SiteIndex>::max();
    std::vector<SiteIndex> next(n, none);
    for (const auto& b : lattice.hoppings()) {
        if (next[b.from] != none) {
            return std::nullopt;
        }
        next[b.from] = b.to;
    }
    std::vector<SiteIndex> order;
    order.reserve(n);
    SiteIndex site = 0;
    for (std::size_t step = 0; step < n; ++step) {
        if (site == none) {
            return std::nullopt;
        }
        order.push_back(site);
        site = next[site];
    }
    if (site != 0) {
        return std::nullopt;
    }
    std::vector<SiteIndex> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        return std::nullopt;
    }
    return order;
}

ScatteringSystem apply_rotation(const ScatteringSystem& system, const RotationParams& rotation) {
    if (rotation.geometry_constant < 0.0) {
        throw std::invalid_argument("rotation geometry constant K must be non-negative");
    }
    const CentralLattice& lattice = system.lattice();
    if (!directed_ring_order(lattice)) {
        throw std::invalid_argument("rotation is only defined for ring lattices");
    }
    const double omega_k = rotation.angular_velocity * rotation.geometry_constant;
    std::vector<Hopping> bonds(lattice.hoppings().begin(), lattice.hoppings().end());
    for (auto& b : bonds) {
        // J + iΩK = J_Ω e^{iφ_Ω}
        const Complex rotated{b.amplitude, omega_k};
        b.amplitude = std::abs(rotated);
        b.phase += std::arg(rotated);
    }
    CentralLattice rotated_lattice(lattice.size(), std::move(bonds),
                                   std::vector<double>(lattice.onsite().begin(), lattice.onsite().end()));
    return ScatteringSystem(std::move(rotated_lattice),
                            std::vector<LeadSpec>(system.leads().begin(), system.leads().end()));
}

double bond_phase(const CentralLattice& lattice, SiteIndex a, SiteIndex b) {
    for (const auto& h : lattice.hoppings()) {
        const double sign_phase = h.amplitude < 0.0 ? std::numbers::pi : 0.0;
        if (h.from == a && h.to == b) {
            return h.phase + sign_phase;
        }
        if (h.from == b && h.to == a) {
            return -(h.phase + sign_phase);
        }
    }
    throw std::invalid_argument("sites " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                                " are not bonded");
}

double cycle_flux(const CentralLattice& lattice, std::span<const SiteIndex> cycle) {
    double flux = 0.0;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        flux += bond_phase(lattice, cycle[i], cycle[(i + 1) % cycle.size()]);
    }
    return flux;
}

std::vector<double> fundamental_cycle_fluxes(const CentralLattice& lattice) {
    const std::size_t n = lattice.size();
    const auto adj = lattice.adjacency();
    // potential[x] = phase accumulated along the tree path root -> x
    std::vector<double> potential(n, 0.0);
    std::vector<bool> visited(n, false);
    std::set<std::pair<SiteIndex, SiteIndex>> tree_edges;
    for (SiteIndex root = 0; root < n; ++root) {
        if (visited[root]) {
            continue;
        }
        visited[root] = true;
        std::deque<SiteIndex> queue{root};
        while (!queue.empty()) {
            const SiteIndex u = queue.front();
            queue.pop_front();
            for (SiteIndex v : adj[u]) {
                if (!visited[v]) {
                    visited[v] = true;
                    potential[v] = potential[u] + bond_phase(lattice, u, v);
                    tree_edges.insert(std::minmax(u, v));
                    queue.push_back(v);
                }
            }
        }
    }
    std::vector<double> fluxes;
    for (const auto& b : lattice.hoppings()) {
        if (tree_edges.contains(std::minmax(b.from, b.to))) {
            continue;
        }
        fluxes.push_back(potential[b.from] + bond_phase(lattice, b.from, b.to) - potential[b.to]);
    }
    return fluxes;
}

double wrap_phase(double phase) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::remainder(phase, two_pi);
    if (w <= -std::numbers::pi) {
        w += two_pi;
    }
    return w;
}

LeadMomentum lead_momentum(double energy, double lead_hopping) {
    if (!(lead_hopping > 0.0)) {
        throw std::invalid_argument("lead hopping t must be positive");
    }
    const double edge = 2.0 * lead_hopping;
    const double distance = std::abs(energy) - edge;
    if (std::abs(distance) <= band_edge_tolerance * edge) {
        return {energy < 0.0 ? 0.0 : std::numbers::pi, LeadRegime::band_edge};
    }
    if (distance > 0.0) {
        return {std::numeric_limits<double>::quiet_NaN(), LeadRegime::evanescent};
    }
    return {std::acos(-energy / edge), LeadRegime::propagating};
}

Complex ring_momentum(double energy, double hopping, double onsite) {
    if (hopping == 0.0) {
        throw std::invalid_argument("ring hopping J must be non-zero");
    }
    const double c = (onsite - energy) / (2.0 * hopping);
    if (std::abs(c) <= 1.0) {
        return {std::acos(c), 0.0};
    }
    Complex q = std::acos(Complex{c, 0.0});
    // cos(conj q) = conj(cos q) = c, so flipping the sign of Im q stays on the branch.
    if (q.imag() < 0.0) {
        q = std::conj(q);
    }
    return q;
}

}  // namespace ringflux
