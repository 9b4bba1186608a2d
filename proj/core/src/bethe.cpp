#include "ringflux/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace ringflux {

namespace {

constexpr Complex I{0.0, 1.0};

std::vector<LeadMomentum> momenta_or_throw(const ScatteringSystem& system, double energy) {
    std::vector<LeadMomentum> out;
    for (std::size_t l = 0; l < system.lead_count(); ++l) {
        const auto km = lead_momentum(energy, system.leads()[l].hopping);
        if (km.regime == LeadRegime::evanescent) {
            throw std::domain_error("energy " + std::to_string(energy) +
                                    " lies outside the band of lead " + std::to_string(l + 1));
        }
        out.push_back(km);
    }
    return out;
}

bool coupled(const LeadSpec& lead) { return lead.coupling != 0.0; }

std::optional<Complex> uniform_ring_momentum(const CentralLattice& lattice, double energy) {
    const auto bonds = lattice.hoppings();
    const auto onsite = lattice.onsite();
    if (bonds.empty()) {
        return std::nullopt;
    }
    const double amplitude = std::abs(bonds.front().amplitude);
    const bool uniform_bonds = std::all_of(bonds.begin(), bonds.end(), [&](const Hopping& h) {
        return std::abs(h.amplitude) == amplitude;
    });
    const bool uniform_onsite = std::all_of(onsite.begin(), onsite.end(),
                                            [&](double w) { return w == onsite.front(); });
    if (!uniform_bonds || !uniform_onsite || amplitude == 0.0) {
        return std::nullopt;
    }
    return ring_momentum(energy, amplitude, onsite.front());
}

// Column scale c_j with psi_a(j) = c_j (X_j + δ_{j,p}), and the row scale s.
struct Scaling {
    std::vector<double> column;
    double row = 1.0;
};

Scaling unknown_scaling(const ScatteringSystem& system, std::size_t input_lead) {
    const auto& in = system.leads()[input_lead];
    Scaling sc;
    sc.row = in.coupling / in.hopping;
    sc.column.assign(system.lattice().size(), 1.0 / sc.row);
    for (const auto& lead : system.leads()) {
        if (coupled(lead)) {
            sc.column[lead.site] = lead.hopping / lead.coupling;
        }
    }
    return sc;
}

ScatteringSolution decoupled_input(const ScatteringSystem& system, std::size_t input_lead,
                                   double energy, std::vector<double> momenta, bool band_edge) {
    ScatteringSolution sol;
    sol.input_lead = input_lead;
    sol.energy = energy;
    sol.lead_amplitudes.assign(system.lead_count(), Complex{});
    sol.lead_amplitudes[input_lead] = -1.0;
    sol.site_amplitudes.assign(system.lattice().size(), Complex{});
    sol.lead_momenta = std::move(momenta);
    sol.ring_momentum = uniform_ring_momentum(system.lattice(), energy);
    sol.band_edge = band_edge;
    return sol;
}

}  // namespace

double ScatteringSolution::transmission_to(const ScatteringSystem& system, std::size_t q) const {
    if (band_edge) {
        return 0.0;
    }
    const double in_current = system.leads()[input_lead].hopping * std::sin(lead_momenta[input_lead]);
    const double out_current = system.leads()[q].hopping * std::sin(lead_momenta[q]);
    return std::norm(lead_amplitudes[q]) * out_current / in_current;
}

Complex ScatteringSolution::lead_wavefunction(std::size_t lead, int j) const {
    const double k = lead_momenta[lead];
    Complex psi = lead_amplitudes[lead] * std::polar(1.0, k * j);
    if (lead == input_lead) {
        psi += std::polar(1.0, -k * j);
    }
    return psi;
}

BetheLinearSystem bethe_linear_system(const ScatteringSystem& system, std::size_t input_lead,
                                      double energy) {
    if (input_lead >= system.lead_count()) {
        throw std::out_of_range("input lead index out of range");
    }
    const auto momenta = momenta_or_throw(system, energy);
    const CentralLattice& lattice = system.lattice();
    const std::size_t n = lattice.size();

    // Row j of the central Schrödinger equation after eliminating the leads:
    //   (E - ω_j) psi(j) + Σ_bonds J e^{iφ} psi(j') + (g²/t) e^{ik} psi(j) = 2i g_p sin k_p δ_{j,p}
    ComplexMatrix rows(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        rows(j, j) = energy - lattice.onsite()[j];
    }
    for (const auto& b : lattice.hoppings()) {
        const Complex element = b.amplitude * std::polar(1.0, b.phase);
        rows(b.from, b.to) += element;
        rows(b.to, b.from) += std::conj(element);
    }
    for (std::size_t l = 0; l < system.lead_count(); ++l) {
        const auto& lead = system.leads()[l];
        if (coupled(lead)) {
            rows(lead.site, lead.site) +=
                (lead.coupling * lead.coupling / lead.hopping) * std::polar(1.0, momenta[l].k);
        }
    }

    const Scaling sc = unknown_scaling(system, input_lead);
    const auto& in = system.leads()[input_lead];
    const SiteIndex p = in.site;

    BetheLinearSystem out{ComplexMatrix(n, n), std::vector<Complex>(n)};
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t jp = 0; jp < n; ++jp) {
            out.matrix(j, jp) = sc.row * rows(j, jp) * sc.column[jp];
        }
        out.rhs[j] = -out.matrix(j, p);
    }
    out.rhs[p] += 2.0 * I * sc.row * in.coupling * std::sin(momenta[input_lead].k);
    return out;
}

ScatteringSolution solve_scattering(const ScatteringSystem& system, std::size_t input_lead,
                                    double energy) {
    if (input_lead >= system.lead_count()) {
        throw std::out_of_range("input lead index out of range");
    }
    const auto momenta = momenta_or_throw(system, energy);
    std::vector<double> ks;
    for (const auto& km : momenta) {
        ks.push_back(km.k);
    }
    const bool edge = std::any_of(momenta.begin(), momenta.end(), [](const LeadMomentum& km) {
        return km.regime == LeadRegime::band_edge;
    });
    if (edge || !coupled(system.leads()[input_lead])) {
        return decoupled_input(system, input_lead, energy, std::move(ks), edge);
    }

    const BetheLinearSystem linear = bethe_linear_system(system, input_lead, energy);
    const std::vector<Complex> x = LuDecomposition(linear.matrix).solve(linear.rhs);

    const Scaling sc = unknown_scaling(system, input_lead);
    const SiteIndex p = system.leads()[input_lead].site;

    ScatteringSolution sol;
    sol.input_lead = input_lead;
    sol.energy = energy;
    sol.lead_momenta = std::move(ks);
    sol.ring_momentum = uniform_ring_momentum(system.lattice(), energy);
    sol.site_amplitudes.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        sol.site_amplitudes[j] = sc.column[j] * (x[j] + (j == p ? 1.0 : 0.0));
    }
    sol.lead_amplitudes.resize(system.lead_count());
    for (std::size_t l = 0; l < system.lead_count(); ++l) {
        const auto& lead = system.leads()[l];
        sol.lead_amplitudes[l] = coupled(lead) ? x[lead.site] : Complex{l == input_lead ? -1.0 : 0.0};
    }
    return sol;
}

TransmissionMatrix bethe_transmission(const ScatteringSystem& system, double energy) {
    const std::size_t m = system.lead_count();
    TransmissionMatrix tm;
    tm.energy = energy;
    tm.lead_count = m;
    tm.values.assign(m * m, 0.0);
    tm.reflection.assign(m, 1.0);
    tm.gamma0.assign(m, 0.0);
    for (std::size_t p = 0; p < m; ++p) {
        const ScatteringSolution sol = solve_scattering(system, p, energy);
        if (sol.band_edge) {
            return total_reflection(m, energy);
        }
        const auto& lead = system.leads()[p];
        tm.gamma0[p] = 2.0 * lead.coupling * lead.coupling / lead.hopping * std::sin(sol.lead_momenta[p]);
        for (std::size_t q = 0; q < m; ++q) {
            if (q != p) {
                tm.at(p, q) = sol.transmission_to(system, q);
            }
        }
        tm.reflection[p] = sol.reflection();
    }
    return tm;
}

double schrodinger_residual(const ScatteringSystem& system, const ScatteringSolution& solution) {
    const CentralLattice& lattice = system.lattice();
    const ComplexMatrix h = lattice.hamiltonian();
    const double energy = solution.energy;
    const auto& psi = solution.site_amplitudes;
    double worst = 0.0;

    for (std::size_t j = 0; j < lattice.size(); ++j) {
        Complex lhs{};
        for (std::size_t jp = 0; jp < lattice.size(); ++jp) {
            lhs += h(j, jp) * psi[jp];
        }
        if (const auto l = system.lead_at(j)) {
            lhs -= system.leads()[*l].coupling * solution.lead_wavefunction(*l, 1);
        }
        worst = std::max(worst, std::abs(lhs - energy * psi[j]));
    }
    for (std::size_t l = 0; l < system.lead_count(); ++l) {
        const auto& lead = system.leads()[l];
        const Complex b1 = solution.lead_wavefunction(l, 1);
        const Complex b2 = solution.lead_wavefunction(l, 2);
        const Complex b3 = solution.lead_wavefunction(l, 3);
        const Complex first = -lead.coupling * psi[lead.site] - lead.hopping * b2 - energy * b1;
        const Complex second = -lead.hopping * (b3 + b1) - energy * b2;
        worst = std::max({worst, std::abs(first), std::abs(second)});
    }
    return worst;
}

std::vector<ArcAmplitudes> arc_amplitudes(const ScatteringSystem& system,
                                          const ScatteringSolution& solution) {
    const CentralLattice& lattice = system.lattice();
    const auto order = directed_ring_order(lattice);
    if (!order) {
        throw std::invalid_argument("arc amplitudes need a directed ring lattice");
    }
    if (!solution.ring_momentum) {
        throw std::domain_error("arc amplitudes need a uniform ring");
    }
    const Complex q = *solution.ring_momentum;
    if (q.imag() != 0.0 || std::abs(std::sin(q.real())) < 1e-12) {
        throw std::domain_error("arc amplitudes need a real ring momentum with sin q != 0");
    }

    const std::size_t n = order->size();
    std::vector<std::size_t> position(n);
    for (std::size_t i = 0; i < n; ++i) {
        position[(*order)[i]] = i;
    }
    std::vector<bool> is_lead_site(n, false);
    for (const auto& lead : system.leads()) {
        is_lead_site[lead.site] = true;
    }

    std::vector<ArcAmplitudes> arcs;
    for (std::size_t l = 0; l < system.lead_count(); ++l) {
        const std::size_t start = position[system.leads()[l].site];
        std::size_t length = 1;
        while (!is_lead_site[(*order)[(start + length) % n]]) {
            ++length;
        }
        const SiteIndex s1 = (*order)[start];
        const SiteIndex s2 = (*order)[(start + 1) % n];
        const double phi1 = bond_phase(lattice, s1, s2);
        const double qr = q.real();
        // psi(j) = A1 e^{i(qj - Σ_{m<j} φ_m)} + A2 e^{-i(qj + Σ_{m<j} φ_m)}, solved at j = 1, 2
        const Complex a11 = std::polar(1.0, qr);
        const Complex a12 = std::polar(1.0, -qr);
        const Complex a21 = std::polar(1.0, 2.0 * qr - phi1);
        const Complex a22 = std::polar(1.0, -(2.0 * qr + phi1));
        const Complex det = a11 * a22 - a12 * a21;
        const Complex psi1 = solution.site_amplitudes[s1];
        const Complex psi2 = solution.site_amplitudes[s2];
        arcs.push_back({l, length, (psi1 * a22 - a12 * psi2) / det, (a11 * psi2 - a21 * psi1) / det});
    }
    return arcs;
}

ClosedForm3Site ClosedForm3Site::at_energy(double g, double t, double J, double omega, double flux,
                                           double energy) {
    const auto km = lead_momentum(energy, t);
    if (km.regime == LeadRegime::evanescent) {
        throw std::domain_error("energy outside the lead band");
    }
    return {g, t, J, omega, flux, km.k};
}

double ClosedForm3Site::energy() const { return -2.0 * t * std::cos(k); }

ScatteringSystem ClosedForm3Site::system() const {
    return ring_system(3, J, omega, flux, FluxDistribution::uniform,
                       {{0, g, t}, {1, g, t}, {2, g, t}});
}

DiodeCoefficients closed_form_3site(const ClosedForm3Site& p) {
    const double sin_k = std::sin(p.k);
    if (std::abs(sin_k) < 1e-15) {
        return {0.0, 0.0, 1.0};
    }
    const Complex theta = 2.0 * p.t * p.t * std::cos(p.k) - p.g * p.g * std::polar(1.0, p.k) + p.t * p.omega;
    const double jt = p.J * p.t;
    const Complex core = 2.0 * jt * jt * jt * std::cos(p.flux) + 3.0 * jt * jt * theta - theta * theta * theta;
    const double xi = std::norm(core);
    const double scale = 2.0 * std::abs(jt * jt * jt) + 3.0 * jt * jt * std::abs(theta) + std::pow(std::abs(theta), 3);
    if (xi <= std::pow(64.0 * std::numeric_limits<double>::epsilon() * scale, 2)) {
        throw NonGenericPointError("closed form denominator vanishes (bound state at injection energy)");
    }
    const double prefactor = 4.0 * std::pow(p.g, 4) * jt * jt / xi * sin_k * sin_k;
    const double t_r = prefactor * std::norm(jt * std::polar(1.0, -p.flux) + theta);
    const double t_l = prefactor * std::norm(jt * std::polar(1.0, p.flux) + theta);
    return {t_r, t_l, 1.0 - t_r - t_l};
}

DiodeCoefficients diode_coefficients(const TransmissionMatrix& tm) {
    if (tm.lead_count != 3) {
        throw std::invalid_argument("diode coefficients need a three-lead transmission matrix");
    }
    return {tm(0, 2), tm(0, 1), tm.reflection[0]};
}

}  // namespace ringflux
