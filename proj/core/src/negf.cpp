#include "ringflux/negf.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

namespace ringflux {

std::vector<SelfEnergy> lead_self_energies(std::span<const LeadSpec> leads, double energy) {
    std::vector<SelfEnergy> out;
    out.reserve(leads.size());
    for (std::size_t l = 0; l < leads.size(); ++l) {
        const auto& lead = leads[l];
        const LeadMomentum km = lead_momentum(energy, lead.hopping);
        if (km.regime == LeadRegime::evanescent) {
            throw std::domain_error("energy " + std::to_string(energy) +
                                    " lies outside the band of lead " + std::to_string(l + 1));
        }
        const double strength = lead.coupling * lead.coupling / lead.hopping;
        out.push_back({l, lead.site, -strength * std::polar(1.0, km.k), km.regime});
    }
    return out;
}

namespace {

ComplexMatrix build_h_eff(const CentralLattice& lattice, std::span<const SelfEnergy> sigmas,
                          double energy) {
    ComplexMatrix h_eff = lattice.hamiltonian();
    const std::size_t n = h_eff.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            h_eff(i, j) = -h_eff(i, j);
        }
        h_eff(i, i) += energy;
    }
    for (const auto& s : sigmas) {
        h_eff(s.site, s.site) -= s.value;
    }
    return h_eff;
}

}  // namespace

ComplexMatrix assemble_h_eff(const CentralLattice& lattice, std::span<const LeadSpec> leads,
                             double energy) {
    return build_h_eff(lattice, lead_self_energies(leads, energy), energy);
}

ComplexMatrix assemble_h_eff(const ScatteringSystem& system, double energy) {
    return assemble_h_eff(system.lattice(), system.leads(), energy);
}

ComplexMatrix greens_function(const ComplexMatrix& h_eff) {
    return LuDecomposition(h_eff).inverse();
}

double TransmissionMatrix::max_asymmetry() const {
    double m = 0.0;
    for (std::size_t p = 0; p < lead_count; ++p) {
        for (std::size_t q = p + 1; q < lead_count; ++q) {
            m = std::max(m, std::abs((*this)(p, q) - (*this)(q, p)));
        }
    }
    return m;
}

double TransmissionMatrix::unitarity_defect() const {
    double m = 0.0;
    for (std::size_t p = 0; p < lead_count; ++p) {
        double total = reflection[p];
        for (std::size_t q = 0; q < lead_count; ++q) {
            total += (*this)(p, q);
        }
        m = std::max(m, std::abs(total - 1.0));
    }
    return m;
}

double max_deviation(const TransmissionMatrix& a, const TransmissionMatrix& b) {
    if (a.lead_count != b.lead_count) {
        throw std::invalid_argument("transmission matrices have different lead counts");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    }
    for (std::size_t p = 0; p < a.lead_count; ++p) {
        m = std::max(m, std::abs(a.reflection[p] - b.reflection[p]));
    }
    return m;
}

TransmissionMatrix total_reflection(std::size_t lead_count, double energy) {
    TransmissionMatrix tm;
    tm.energy = energy;
    tm.lead_count = lead_count;
    tm.values.assign(lead_count * lead_count, 0.0);
    tm.reflection.assign(lead_count, 1.0);
    tm.gamma0.assign(lead_count, 0.0);
    tm.band_edge = true;
    return tm;
}

namespace {

bool any_band_edge(std::span<const SelfEnergy> sigmas) {
    return std::any_of(sigmas.begin(), sigmas.end(),
                       [](const SelfEnergy& s) { return s.regime == LeadRegime::band_edge; });
}

void fill_reflection(TransmissionMatrix& tm) {
    tm.reflection.assign(tm.lead_count, 1.0);
    for (std::size_t p = 0; p < tm.lead_count; ++p) {
        for (std::size_t q = 0; q < tm.lead_count; ++q) {
            tm.reflection[p] -= tm(p, q);
        }
    }
}

}  // namespace

TransmissionMatrix transmission(const ScatteringSystem& system, double energy) {
    const std::size_t m = system.lead_count();
    const auto sigmas = lead_self_energies(system.leads(), energy);
    if (any_band_edge(sigmas)) {
        return total_reflection(m, energy);
    }

    const LuDecomposition lu(build_h_eff(system.lattice(), sigmas, energy));

    TransmissionMatrix tm;
    tm.energy = energy;
    tm.lead_count = m;
    tm.values.assign(m * m, 0.0);
    tm.gamma0.resize(m);
    for (std::size_t p = 0; p < m; ++p) {
        tm.gamma0[p] = sigmas[p].gamma();
    }
    for (std::size_t p = 0; p < m; ++p) {
        // column p of G^R: response anywhere to injection at lead site p
        const auto column = lu.inverse_column(sigmas[p].site);
        for (std::size_t q = 0; q < m; ++q) {
            if (q == p) {
                continue;
            }
            tm.at(p, q) = tm.gamma0[p] * tm.gamma0[q] * std::norm(column[sigmas[q].site]);
        }
    }
    fill_reflection(tm);
    return tm;
}

TransmissionMatrix transmission_trace(const ScatteringSystem& system, double energy) {
    const std::size_t m = system.lead_count();
    const auto sigmas = lead_self_energies(system.leads(), energy);
    if (any_band_edge(sigmas)) {
        return total_reflection(m, energy);
    }
    const ComplexMatrix g_r = greens_function(assemble_h_eff(system, energy));
    const ComplexMatrix g_a = g_r.adjoint();
    const std::size_t n = g_r.rows();

    std::vector<ComplexMatrix> gammas;
    gammas.reserve(m);
    for (const auto& s : sigmas) {
        ComplexMatrix sigma(n, n);
        sigma(s.site, s.site) = s.value;
        const ComplexMatrix diff = sigma - sigma.adjoint();
        ComplexMatrix gamma(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                gamma(i, j) = Complex{0.0, 1.0} * diff(i, j);
            }
        }
        gammas.push_back(std::move(gamma));
    }

    TransmissionMatrix tm;
    tm.energy = energy;
    tm.lead_count = m;
    tm.values.assign(m * m, 0.0);
    tm.gamma0.resize(m);
    for (std::size_t p = 0; p < m; ++p) {
        tm.gamma0[p] = sigmas[p].gamma();
    }
    for (std::size_t p = 0; p < m; ++p) {
        const ComplexMatrix right = gammas[p] * g_a;
        for (std::size_t q = 0; q < m; ++q) {
            if (q == p) {
                continue;
            }
            const ComplexMatrix product = gammas[q] * g_r * right;
            Complex trace{};
            for (std::size_t i = 0; i < n; ++i) {
                trace += product(i, i);
            }
            tm.at(p, q) = trace.real();
        }
    }
    fill_reflection(tm);
    return tm;
}

unsigned default_sweep_threads() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("RINGFLUX_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) {
            hw = std::min(hw, static_cast<unsigned>(cap));
        }
    }
    return hw;
}

std::vector<SweepPoint> sweep(const ScatteringSystem& system, std::span<const double> energies,
                              unsigned threads) {
    if (!std::is_sorted(energies.begin(), energies.end())) {
        throw std::invalid_argument("sweep grid must be sorted");
    }
    std::vector<SweepPoint> points(energies.size());
    auto evaluate = [&](std::size_t i) {
        SweepPoint& point = points[i];
        point.energy = energies[i];
        try {
            point.result = transmission(system, energies[i]);
        } catch (const std::exception& e) {
            point.error = e.what();
        }
    };

    if (threads == 0) {
        threads = default_sweep_threads();
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, energies.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < energies.size(); ++i) {
            evaluate(i);
        }
        return points;
    }

    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < energies.size(); i = next++) {
                    evaluate(i);
                }
            });
        }
    }
    return points;
}

}  // namespace ringflux
