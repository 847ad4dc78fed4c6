#pragma once

#include <complex>
#include <map>
#include <span>
#include <utility>
#include <vector>

// Moment-based signal reconstruction. All moment arithmetic treats the
// field, noise and amplifier variables as commuting complex/real random
// variables; tables hold mixed moments <(x*)^n x^m> up to a maximum total
// order n + m.
namespace photonlink {

class MomentTable {
 public:
  explicit MomentTable(int max_order);

  /// Delta table: entry (0,0) = 1, everything else zero.
  static MomentTable vacuum(int max_order);
  /// Deterministic amplitude: entry (n,m) = conj(amp)^n amp^m.
  static MomentTable coherent(std::complex<double> amplitude, int max_order);
  /// Circular complex Gaussian with <|x|^2> = variance:
  /// entry (n,m) = delta_nm n! variance^n.
  static MomentTable circular_gaussian(double variance, int max_order);

  int max_order() const { return max_order_; }
  std::complex<double> at(int n, int m) const;
  void set(int n, int m, std::complex<double> value);

  bool hermitian_symmetric(double tol = 1e-9) const;

 private:
  int max_order_;
  std::vector<std::complex<double>> entries_;  // triangular, n + m <= max_order
};

/// Measured-moment table of the amplified signal S = sqrt(G) (a + h*):
/// out(n,m) = G^{(n+m)/2} sum_{i<=n, j<=m} C(n,i) C(m,j) signal(i,j)
///            <h^{n-i} (h*)^{m-j}>.
MomentTable forward_moment_expansion(const MomentTable& signal, const MomentTable& noise,
                                     double gain);

/// Noise moment table recovered from a vacuum-input measurement.
MomentTable noise_from_vacuum(const MomentTable& vacuum_measured, double gain);

/// Inverse of forward_moment_expansion: recovers the signal table by a
/// triangular recursion in total order, using the vacuum calibration for
/// the noise moments.
MomentTable invert_moments(const MomentTable& measured, const MomentTable& vacuum_calibration,
                           double gain);

/// Wigner function synthesized from the moment table on the given
/// phase-space points. Characteristic-function integral over |lambda| <= 6
/// by tensor Gauss-Legendre quadrature (>= 120 nodes per axis). Throws if
/// the imaginary residue exceeds 1e-6 or if dropping two moment orders
/// moves any value by more than 1e-3.
std::vector<double> wigner_from_moments(const MomentTable& moments,
                                        std::span<const std::complex<double>> grid);

struct DualPathConfig {
  double gain = 1.0;
  std::vector<double> reference_moments;  // <V^j>, j = 0..max_order, odd entries zero
  int max_order = 4;
};

struct DualPathMoments {
  std::vector<double> signal;  // <S^n>, n = 0..max_order
  std::vector<double> noise1;  // <chi1^n>
  std::vector<double> noise2;  // <chi2^n>
};

using CrossMoments = std::map<std::pair<int, int>, double>;

/// Recovers signal and per-path noise moments from measured cross-moments
/// <C1^l C2^m> of the dual outputs C1 = G (S + V + chi1),
/// C2 = G (-S + V + chi2), by solving each multinomial expansion for its
/// highest-order unknown in increasing order.
DualPathMoments dual_path_recover(const CrossMoments& cross_moments,
                                  const DualPathConfig& config);

/// Central moments <(S - <S>)^n> from raw moments <S^n> (order 0 first).
std::vector<double> central_moments(std::span<const double> raw);

}  // namespace photonlink
