#include "ringflux/random_system.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ringflux {

RandomCase random_case(std::mt19937_64& rng, const RandomSystemLimits& limits) {
    if (limits.max_sites < 2 || limits.max_leads < 2) {
        throw std::invalid_argument("random systems need room for two sites and two leads");
    }
    auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    auto integer = [&](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    auto random_bond = [&](SiteIndex a, SiteIndex b) {
        if (integer(0, 1) == 1) {
            std::swap(a, b);
        }
        return Hopping{a, b, uniform(0.5, 1.5), uniform(-std::numbers::pi, std::numbers::pi)};
    };

    const std::size_t n = integer(2, limits.max_sites);
    std::vector<Hopping> bonds;
    std::vector<std::vector<bool>> linked(n, std::vector<bool>(n, false));
    for (SiteIndex j = 1; j < n; ++j) {
        const SiteIndex parent = integer(0, j - 1);
        bonds.push_back(random_bond(parent, j));
        linked[parent][j] = linked[j][parent] = true;
    }
    for (SiteIndex a = 0; a < n; ++a) {
        for (SiteIndex b = a + 1; b < n; ++b) {
            if (!linked[a][b] && uniform(0.0, 1.0) < limits.extra_bond_probability) {
                bonds.push_back(random_bond(a, b));
                linked[a][b] = linked[b][a] = true;
            }
        }
    }
    std::vector<double> onsite(n);
    for (auto& w : onsite) {
        w = uniform(-1.0, 1.0);
    }

    const std::size_t m = integer(2, std::min(limits.max_leads, n));
    std::vector<SiteIndex> sites(n);
    std::iota(sites.begin(), sites.end(), SiteIndex{0});
    std::shuffle(sites.begin(), sites.end(), rng);

    const double shared_t = uniform(0.6, 1.4);
    double min_t = shared_t;
    std::vector<LeadSpec> leads;
    for (std::size_t l = 0; l < m; ++l) {
        const double t = limits.per_lead_hopping ? uniform(0.6, 1.4) : shared_t;
        min_t = std::min(min_t, t);
        leads.push_back({sites[l], uniform(0.4, 1.4), t});
    }
    const double energy = uniform(-0.98, 0.98) * 2.0 * min_t;
    return {ScatteringSystem(CentralLattice(n, std::move(bonds), std::move(onsite)), std::move(leads)),
            energy};
}

}  // namespace ringflux
