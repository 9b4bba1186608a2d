#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ringflux/complex_matrix.hpp"
#include "ringflux/lattice.hpp"
#include "ringflux/negf.hpp"

namespace ringflux {

/// Exact scattering state for a particle injected through one lead.
///
/// On lead l the wavefunction is psi_b(j) = B(l) e^{ikj} + δ_{l,in} e^{-ikj},
/// with j = 1, 2, ... counted away from the lattice.
struct ScatteringSolution {
    std::size_t input_lead = 0;
    double energy = 0.0;
    std::vector<Complex> lead_amplitudes;  // B(l)
    std::vector<Complex> site_amplitudes;  // psi_a(j)
    std::vector<double> lead_momenta;      // k per lead
    std::optional<Complex> ring_momentum;  // q, only for uniform J and onsite energy
    bool band_edge = false;

    double reflection() const { return std::norm(lead_amplitudes[input_lead]); }
    /// Probability current into lead q per unit incident current.
    double transmission_to(const ScatteringSystem& system, std::size_t q) const;
    /// psi_b(j) on lead l, j >= 1.
    Complex lead_wavefunction(std::size_t lead, int j) const;
};

/// Linear system H_eff·X = W whose solution holds B(l) on lead sites and a
/// scaled psi_a elsewhere. Exposed for inspection and tests.
struct BetheLinearSystem {
    ComplexMatrix matrix;
    std::vector<Complex> rhs;
};

/// Builds the connecting-condition system for injection through `input_lead`.
/// For identical leads the matrix is E - H_C - Σ_leads and
/// W_j = (H_C)_{j,p} - δ_{j,p}(E + (g²/t)e^{-ik}).
BetheLinearSystem bethe_linear_system(const ScatteringSystem& system, std::size_t input_lead,
                                      double energy);

/// Solves the scattering state. E on a band edge gives the flagged
/// total-reflection state; E outside a lead band throws std::domain_error.
ScatteringSolution solve_scattering(const ScatteringSystem& system, std::size_t input_lead,
                                    double energy);

/// Transmission matrix assembled from |B(l)|² for every input lead.
TransmissionMatrix bethe_transmission(const ScatteringSystem& system, double energy);

/// Largest violation of H·psi = E·psi over the lattice sites and the first
/// two sites of every lead.
double schrodinger_residual(const ScatteringSystem& system, const ScatteringSolution& solution);

/// Plane-wave coefficients A₁, A₂ of one ring arc (the sites from a lead up
/// to, excluding, the next lead along the ring).
struct ArcAmplitudes {
    std::size_t lead = 0;
    std::size_t length = 0;
    Complex forward;   // A₁
    Complex backward;  // A₂
};

/// Recovers the arc coefficients from a solution on a directed ring with a
/// uniform hopping and onsite energy. Needs real q with sin q ≠ 0; throws
/// std::domain_error otherwise.
std::vector<ArcAmplitudes> arc_amplitudes(const ScatteringSystem& system,
                                          const ScatteringSolution& solution);

/// Parameters of the symmetric three-site ring with one lead per site.
struct ClosedForm3Site {
    double g = 1.0;
    double t = 1.0;
    double J = 1.0;
    double omega = 0.0;
    double flux = 0.0;
    double k = 0.0;

    /// Same parameters with k taken from E = -2t cos k.
    static ClosedForm3Site at_energy(double g, double t, double J, double omega, double flux,
                                     double energy);

    double energy() const;
    /// The ring these parameters describe (leads 1, 2, 3 on sites 1, 2, 3).
    ScatteringSystem system() const;
};

struct DiodeCoefficients {
    double T_R = 0.0;  // clockwise: T_13 = T_32 = T_21
    double T_L = 0.0;  // anticlockwise: T_12 = T_23 = T_31
    double R = 0.0;
};

/// Raised at a parameter point where the closed form's denominator vanishes.
class NonGenericPointError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Closed-form coefficients of the three-site ring; returns (0, 0, 1) when
/// sin k = 0.
DiodeCoefficients closed_form_3site(const ClosedForm3Site& params);

/// Reads T_R, T_L and R off a three-lead transmission matrix.
DiodeCoefficients diode_coefficients(const TransmissionMatrix& tm);

}  // namespace ringflux
