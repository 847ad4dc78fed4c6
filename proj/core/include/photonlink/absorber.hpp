#pragma once

#include <complex>
#include <span>
#include <vector>

// Transfer-matrix model of a superconducting photon-absorber chain along a
// one-dimensional waveguide, plus the circuit-parameter mapping for the
// dimensionless coupling and the click-counter efficiency figure.
namespace photonlink {

/// Dimensionless absorber coupling. A physical absorber has Re(gamma) > 0;
/// detuning from the absorber resonance shows up as a negative imaginary
/// part.
struct AbsorberCoupling {
  std::complex<double> gamma;
};

/// 2x2 complex transfer matrix mapping (right-moving, left-moving)
/// amplitudes on the left of an element to those on its right.
struct TransferMatrix {
  std::complex<double> t11{1.0, 0.0}, t12{0.0, 0.0};
  std::complex<double> t21{0.0, 0.0}, t22{1.0, 0.0};

  std::complex<double> det() const { return t11 * t22 - t12 * t21; }
  TransferMatrix operator*(const TransferMatrix& rhs) const;
};

struct ChainResponse {
  double reflectance = 0.0;
  double transmittance = 1.0;
  double absorption = 0.0;
};

struct ChainDesign {
  double gamma = 0.0;        // shared real coupling
  double phase = 0.0;        // shared inter-absorber propagation phase, rad
  double absorption = 0.0;
};

struct CircuitParams {
  double junction_cap = 0.0;    // F
  double gate_cap = 0.0;        // F
  double decay_rate = 0.0;      // 1/s, excited-to-continuum rate
  double carrier_freq = 0.0;    // rad/s
  double absorber_freq = 0.0;   // rad/s
  double line_impedance = 0.0;  // ohm
};

/// Fraction of incident flux absorbed by a single element; equals
/// 2 gamma / (1 + gamma)^2 for real coupling. Throws for Re(gamma) <= 0.
double single_absorption(const AbsorberCoupling& coupling);

/// Transfer matrix of one absorber: [[1 - 1/g, -1/g], [1/g, 1 + 1/g]].
/// Unit determinant by construction. Throws for gamma == 0.
TransferMatrix transfer_matrix(const AbsorberCoupling& coupling);

/// Free-propagation matrix diag(e^{i phi}, e^{-i phi}).
TransferMatrix propagation_matrix(double phase);

/// Composes a chain of absorbers separated by free-propagation phases and
/// extracts reflectance |M21/M22|^2, transmittance |det M / M22|^2 and the
/// absorbed remainder for left-side incidence. phases.size() must equal
/// couplings.size() - 1 (both empty for the trivial chain).
ChainResponse chain_response(std::span<const AbsorberCoupling> couplings,
                             std::span<const double> phases);

/// Maximizes chain absorption over one shared real coupling and one shared
/// phase: 64x64 coarse grid (gamma log-spaced in [0.01, 10], phase in
/// [0, pi)) refined by coordinate descent down to 1e-9 steps.
ChainDesign optimize_chain(int n_absorbers);

/// Coupling from junction circuit parameters.
AbsorberCoupling gamma_from_circuit(const CircuitParams& params);

/// Click-counter efficiency p_bright (1 - p_dark).
double counter_efficiency(double p_bright, double p_dark);

}  // namespace photonlink
