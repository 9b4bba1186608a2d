#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ringflux/complex_matrix.hpp"
#include "ringflux/lattice.hpp"

namespace ringflux {

/// Retarded self-energy -(g²/t)e^{ik} of one lead, living on its attachment site.
struct SelfEnergy {
    std::size_t lead_index = 0;
    SiteIndex site = 0;
    Complex value;
    LeadRegime regime = LeadRegime::propagating;

    /// Γ_0 = i(Σ_0 - Σ_0*) = -2 Im Σ_0.
    double gamma() const noexcept { return -2.0 * value.imag(); }
};

/// Self-energies of `leads` at energy E. Throws std::domain_error if E lies
/// outside the band of any lead.
std::vector<SelfEnergy> lead_self_energies(std::span<const LeadSpec> leads, double energy);

/// H_eff = E - H_C - Σ_leads for an arbitrary (possibly empty) lead set.
ComplexMatrix assemble_h_eff(const CentralLattice& lattice, std::span<const LeadSpec> leads,
                             double energy);
ComplexMatrix assemble_h_eff(const ScatteringSystem& system, double energy);

/// G^R = H_eff⁻¹. Throws SingularMatrixError with a condition estimate.
ComplexMatrix greens_function(const ComplexMatrix& h_eff);

/// All lead-to-lead transmission probabilities at one energy.
///
/// `t(p, q)` is the probability for a particle injected in lead p to leave
/// through lead q; the diagonal is kept at zero and the reflection lives in
/// `reflection`.
struct TransmissionMatrix {
    double energy = 0.0;
    std::size_t lead_count = 0;
    std::vector<double> values;      // row-major M×M
    std::vector<double> reflection;  // R_p
    std::vector<double> gamma0;      // Γ_0 per lead
    bool band_edge = false;          // E sits on a lead band edge: T = 0, R = 1 by convention

    double operator()(std::size_t p, std::size_t q) const { return values[p * lead_count + q]; }
    double& at(std::size_t p, std::size_t q) { return values[p * lead_count + q]; }

    /// max_{p,q} |T_pq - T_qp|.
    double max_asymmetry() const;
    /// max_p |R_p + Σ_q T_pq - 1|.
    double unitarity_defect() const;
};

/// max elementwise |a - b| over T and R; matrices must have equal lead count.
double max_deviation(const TransmissionMatrix& a, const TransmissionMatrix& b);

/// Band-edge convention result: every T_pq = 0, every R_p = 1.
TransmissionMatrix total_reflection(std::size_t lead_count, double energy);

/// T_pq = Γ_p Γ_q |G^R_qp|², computed from the M lead columns of G^R only.
TransmissionMatrix transmission(const ScatteringSystem& system, double energy);

/// Debug path: forms the full matrices and evaluates Tr[Γ_q G^R Γ_p G^A].
TransmissionMatrix transmission_trace(const ScatteringSystem& system, double energy);

/// One grid point of a sweep; `error` is set (and `result` empty) when the
/// point could not be evaluated.
struct SweepPoint {
    double energy = 0.0;
    std::optional<TransmissionMatrix> result;
    std::string error;
};

/// Evaluates `transmission` on every grid energy, in order. Points are
/// independent and are distributed over `threads` workers (0 = pick from
/// RINGFLUX_THREADS / hardware). A failing point becomes an annotated gap.
/// Throws std::invalid_argument if the grid is not sorted.
std::vector<SweepPoint> sweep(const ScatteringSystem& system, std::span<const double> energies,
                              unsigned threads = 0);

/// Worker count honouring the RINGFLUX_THREADS cap.
unsigned default_sweep_threads();

}  // namespace ringflux
