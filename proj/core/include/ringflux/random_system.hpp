#pragma once

#include <cstddef>
#include <random>

#include "ringflux/lattice.hpp"

namespace ringflux {

/// Bounds for randomly generated scattering problems.
struct RandomSystemLimits {
    std::size_t max_sites = 8;
    std::size_t max_leads = 4;
    bool per_lead_hopping = false;  // otherwise every lead shares one t
    double extra_bond_probability = 0.4;
};

struct RandomCase {
    ScatteringSystem system;
    double energy = 0.0;  // strictly inside every lead band
};

/// Connected random lattice (random spanning tree plus extra bonds) with
/// random amplitudes, Peierls phases, onsite energies and lead placements.
RandomCase random_case(std::mt19937_64& rng, const RandomSystemLimits& limits = {});

}  // namespace ringflux
