#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "ringflux/complex_matrix.hpp"
#include "ringflux/lattice.hpp"

namespace test_support {

inline ringflux::ScatteringSystem three_ring(double g, double t, double J, double omega, double flux) {
    return ringflux::ring_system(3, J, omega, flux, ringflux::FluxDistribution::uniform,
                                 {{0, g, t}, {1, g, t}, {2, g, t}});
}

/// Five sites, six bonds with phases, three unequal leads.
inline ringflux::ScatteringSystem five_site_graph() {
    using ringflux::Hopping;
    ringflux::CentralLattice lattice(5,
                                     {{0, 1, 1.0, 0.3},
                                      {1, 2, 0.8, -1.1},
                                      {2, 3, 1.2, 0.7},
                                      {3, 4, 0.9, 2.0},
                                      {4, 0, 1.1, -0.4},
                                      {1, 3, 0.6, 1.3}},
                                     {0.2, -0.5, 0.0, 0.7, -0.3});
    return {lattice, {{0, 0.9, 1.0}, {2, 0.7, 1.3}, {4, 1.1, 0.8}}};
}

/// Permutation-sum determinant, independent of any factorization.
inline ringflux::Complex leibniz_determinant(const ringflux::ComplexMatrix& a) {
    const std::size_t n = a.rows();
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    ringflux::Complex det = 0;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                inversions += p[i] > p[j] ? 1 : 0;
            }
        }
        ringflux::Complex term = inversions % 2 == 0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            term *= a(i, p[i]);
        }
        det += term;
    } while (std::next_permutation(p.begin(), p.end()));
    return det;
}

inline ringflux::ComplexMatrix minor_of(const ringflux::ComplexMatrix& a, std::size_t row, std::size_t col) {
    ringflux::ComplexMatrix m(a.rows() - 1, a.cols() - 1);
    for (std::size_t i = 0, mi = 0; i < a.rows(); ++i) {
        if (i == row) {
            continue;
        }
        for (std::size_t j = 0, mj = 0; j < a.cols(); ++j) {
            if (j == col) {
                continue;
            }
            m(mi, mj++) = a(i, j);
        }
        ++mi;
    }
    return m;
}

}  // namespace test_support
