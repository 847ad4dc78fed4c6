#include "photonlink/absorber.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "photonlink/constants.hpp"

namespace photonlink {

namespace {

double norm2(std::complex<double> z) { return std::norm(z); }

ChainResponse response_from_matrix(const TransferMatrix& m) {
  if (std::abs(m.t22) < 1e-300)
    throw std::domain_error("chain_response: degenerate chain (|M22| ~ 0)");
  ChainResponse out;
  out.reflectance = norm2(m.t21 / m.t22);
  out.transmittance = norm2(m.det() / m.t22);
  out.absorption = 1.0 - out.reflectance - out.transmittance;
  return out;
}

double homogeneous_chain_absorption(int n, double gamma, double phase) {
  const AbsorberCoupling c{{gamma, 0.0}};
  TransferMatrix m = transfer_matrix(c);
  const TransferMatrix t = m;
  const TransferMatrix p = propagation_matrix(phase);
  for (int i = 1; i < n; ++i) m = t * (p * m);
  return response_from_matrix(m).absorption;
}

}  // namespace

TransferMatrix TransferMatrix::operator*(const TransferMatrix& rhs) const {
  TransferMatrix out;
  out.t11 = t11 * rhs.t11 + t12 * rhs.t21;
  out.t12 = t11 * rhs.t12 + t12 * rhs.t22;
  out.t21 = t21 * rhs.t11 + t22 * rhs.t21;
  out.t22 = t21 * rhs.t12 + t22 * rhs.t22;
  return out;
}

double single_absorption(const AbsorberCoupling& coupling) {
  if (!(coupling.gamma.real() > 0.0))
    throw std::invalid_argument("single_absorption: Re(gamma) must be > 0");
  const auto m = transfer_matrix(coupling);
  const auto r = response_from_matrix(m);
  return r.absorption;
}

TransferMatrix transfer_matrix(const AbsorberCoupling& coupling) {
  if (coupling.gamma == std::complex<double>{0.0, 0.0})
    throw std::invalid_argument("transfer_matrix: gamma must be nonzero");
  const std::complex<double> inv = 1.0 / coupling.gamma;
  TransferMatrix m;
  m.t11 = 1.0 - inv;
  m.t12 = -inv;
  m.t21 = inv;
  m.t22 = 1.0 + inv;
  return m;
}

TransferMatrix propagation_matrix(double phase) {
  TransferMatrix m;
  m.t11 = std::polar(1.0, phase);
  m.t22 = std::polar(1.0, -phase);
  m.t12 = m.t21 = {0.0, 0.0};
  return m;
}

ChainResponse chain_response(std::span<const AbsorberCoupling> couplings,
                             std::span<const double> phases) {
  if (couplings.empty()) {
    if (!phases.empty())
      throw std::invalid_argument("chain_response: phases without absorbers");
    return {};
  }
  if (phases.size() + 1 != couplings.size())
    throw std::invalid_argument("chain_response: need one phase between consecutive absorbers");
  for (const auto& c : couplings)
    if (!(c.gamma.real() > 0.0))
      throw std::invalid_argument("chain_response: every coupling needs Re(gamma) > 0");

  TransferMatrix m = transfer_matrix(couplings[0]);
  for (std::size_t i = 1; i < couplings.size(); ++i)
    m = transfer_matrix(couplings[i]) * (propagation_matrix(phases[i - 1]) * m);
  return response_from_matrix(m);
}

ChainDesign optimize_chain(int n_absorbers) {
  if (n_absorbers < 1 || n_absorbers > 64)
    throw std::invalid_argument("optimize_chain: n_absorbers must be in [1, 64]");

  constexpr int kGrid = 64;
  const double lg_lo = std::log10(0.01), lg_hi = std::log10(10.0);

  ChainDesign best;
  best.absorption = -1.0;
  for (int gi = 0; gi < kGrid; ++gi) {
    const double gamma = std::pow(10.0, lg_lo + (lg_hi - lg_lo) * gi / (kGrid - 1));
    const int phases = n_absorbers > 1 ? kGrid : 1;
    for (int pi_ = 0; pi_ < phases; ++pi_) {
      const double phase = std::numbers::pi * pi_ / kGrid;
      const double a = homogeneous_chain_absorption(n_absorbers, gamma, phase);
      if (a > best.absorption) best = {gamma, phase, a};
    }
  }

  // Coordinate descent around the grid optimum.
  double gstep = 0.5 * best.gamma;
  double pstep = std::numbers::pi / kGrid;
  while (gstep > 1e-9 || pstep > 1e-9) {
    bool improved = false;
    for (const double g : {best.gamma - gstep, best.gamma + gstep}) {
      if (g <= 0.0) continue;
      const double a = homogeneous_chain_absorption(n_absorbers, g, best.phase);
      if (a > best.absorption) {
        best.gamma = g;
        best.absorption = a;
        improved = true;
      }
    }
    if (n_absorbers > 1) {
      for (const double p : {best.phase - pstep, best.phase + pstep}) {
        const double a = homogeneous_chain_absorption(n_absorbers, best.gamma, p);
        if (a > best.absorption) {
          best.phase = p;
          best.absorption = a;
          improved = true;
        }
      }
    }
    if (!improved) {
      gstep *= 0.5;
      pstep *= 0.5;
    }
  }
  return best;
}

AbsorberCoupling gamma_from_circuit(const CircuitParams& p) {
  if (!(p.junction_cap > 0.0) || !(p.gate_cap > 0.0) || !(p.decay_rate > 0.0) ||
      !(p.carrier_freq > 0.0) || !(p.absorber_freq > 0.0) || !(p.line_impedance > 0.0))
    throw std::invalid_argument("gamma_from_circuit: all parameters must be > 0");

  const double coupling_strength_sq =
      4.0 * kElementaryCharge * kElementaryCharge /
      (p.junction_cap * kReducedPlanck * p.carrier_freq);
  const double c12 = p.gate_cap / (p.gate_cap + p.junction_cap);
  const double scale = coupling_strength_sq / c12 * kReducedPlanck /
                       (kElementaryCharge * p.line_impedance);
  const std::complex<double> resonance{p.decay_rate, -(p.carrier_freq - p.absorber_freq)};
  return {scale * resonance / p.absorber_freq};
}

double counter_efficiency(double p_bright, double p_dark) {
  if (p_bright < 0.0 || p_bright > 1.0 || p_dark < 0.0 || p_dark > 1.0)
    throw std::invalid_argument("counter_efficiency: probabilities must be in [0, 1]");
  return p_bright * (1.0 - p_dark);
}

}  // namespace photonlink
