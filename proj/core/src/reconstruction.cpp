#include "photonlink/reconstruction.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "photonlink/numeric.hpp"

namespace photonlink {

namespace {

// Pascal triangle; orders used here stay far below the exactness limit of
// double-precision binomials.
double binomial(int n, int k) {
  static const auto table = [] {
    constexpr int kMax = 65;
    std::vector<std::vector<double>> t(kMax);
    for (int i = 0; i < kMax; ++i) {
      t[i].resize(i + 1);
      t[i][0] = t[i][i] = 1.0;
      for (int j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
    }
    return t;
  }();
  if (n < 0 || k < 0 || k > n) return 0.0;
  if (n >= static_cast<int>(table.size()))
    throw std::invalid_argument("binomial: order too large");
  return table[n][k];
}

double multinomial3(int n, int a, int b, int c) {
  if (a + b + c != n) throw std::logic_error("multinomial3: index mismatch");
  return binomial(n, a) * binomial(n - a, b);
}

void check_same_order(const MomentTable& a, const MomentTable& b, const char* what) {
  if (a.max_order() != b.max_order())
    throw std::invalid_argument(std::string(what) + ": moment tables have different max_order");
}

void check_unit_head(const MomentTable& t, const char* what) {
  if (std::abs(t.at(0, 0) - std::complex<double>{1.0, 0.0}) > 1e-12)
    throw std::invalid_argument(std::string(what) + ": entry (0,0) must be 1");
}

}  // namespace

MomentTable::MomentTable(int max_order) : max_order_(max_order) {
  if (max_order < 0) throw std::invalid_argument("MomentTable: max_order must be >= 0");
  entries_.assign(static_cast<std::size_t>(max_order + 1) * (max_order + 2) / 2, {0.0, 0.0});
  set(0, 0, {1.0, 0.0});
}

MomentTable MomentTable::vacuum(int max_order) { return MomentTable(max_order); }

MomentTable MomentTable::coherent(std::complex<double> amplitude, int max_order) {
  MomentTable t(max_order);
  for (int n = 0; n <= max_order; ++n)
    for (int m = 0; n + m <= max_order; ++m)
      t.set(n, m, std::pow(std::conj(amplitude), n) * std::pow(amplitude, m));
  return t;
}

MomentTable MomentTable::circular_gaussian(double variance, int max_order) {
  if (variance < 0.0)
    throw std::invalid_argument("circular_gaussian: variance must be >= 0");
  MomentTable t(max_order);
  double factorial = 1.0;
  for (int n = 1; 2 * n <= max_order; ++n) {
    factorial *= n;
    t.set(n, n, {factorial * std::pow(variance, n), 0.0});
  }
  return t;
}

std::complex<double> MomentTable::at(int n, int m) const {
  if (n < 0 || m < 0 || n + m > max_order_)
    throw std::out_of_range("MomentTable: exponent pair out of range");
  const int t = n + m;
  return entries_[static_cast<std::size_t>(t) * (t + 1) / 2 + m];
}

void MomentTable::set(int n, int m, std::complex<double> value) {
  if (n < 0 || m < 0 || n + m > max_order_)
    throw std::out_of_range("MomentTable: exponent pair out of range");
  const int t = n + m;
  entries_[static_cast<std::size_t>(t) * (t + 1) / 2 + m] = value;
}

bool MomentTable::hermitian_symmetric(double tol) const {
  for (int n = 0; n <= max_order_; ++n)
    for (int m = n; n + m <= max_order_; ++m)
      if (std::abs(at(n, m) - std::conj(at(m, n))) > tol) return false;
  return true;
}

MomentTable forward_moment_expansion(const MomentTable& signal, const MomentTable& noise,
                                     double gain) {
  if (!(gain > 0.0)) throw std::invalid_argument("forward_moment_expansion: gain must be > 0");
  check_same_order(signal, noise, "forward_moment_expansion");
  check_unit_head(signal, "forward_moment_expansion: signal");
  check_unit_head(noise, "forward_moment_expansion: noise");

  const int order = signal.max_order();
  MomentTable out(order);
  for (int n = 0; n <= order; ++n) {
    for (int m = 0; n + m <= order; ++m) {
      std::complex<double> acc{0.0, 0.0};
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= m; ++j)
          acc += binomial(n, i) * binomial(m, j) * signal.at(i, j) * noise.at(m - j, n - i);
      out.set(n, m, std::pow(gain, 0.5 * (n + m)) * acc);
    }
  }
  return out;
}

MomentTable noise_from_vacuum(const MomentTable& vacuum_measured, double gain) {
  if (!(gain > 0.0)) throw std::invalid_argument("noise_from_vacuum: gain must be > 0");
  check_unit_head(vacuum_measured, "noise_from_vacuum");
  const int order = vacuum_measured.max_order();
  MomentTable noise(order);
  for (int p = 0; p <= order; ++p)
    for (int q = 0; p + q <= order; ++q)
      noise.set(p, q, vacuum_measured.at(q, p) / std::pow(gain, 0.5 * (p + q)));
  return noise;
}

MomentTable invert_moments(const MomentTable& measured, const MomentTable& vacuum_calibration,
                           double gain) {
  if (!(gain > 0.0)) throw std::invalid_argument("invert_moments: gain must be > 0");
  check_same_order(measured, vacuum_calibration, "invert_moments");
  check_unit_head(measured, "invert_moments: measured");

  const MomentTable noise = noise_from_vacuum(vacuum_calibration, gain);
  const int order = measured.max_order();
  MomentTable signal(order);
  // Ascending total order: the (i,j) = (n,m) term carries the unit noise
  // factor <h^0 (h*)^0> = 1, everything else is lower order.
  for (int total = 1; total <= order; ++total) {
    for (int n = 0; n <= total; ++n) {
      const int m = total - n;
      std::complex<double> acc = measured.at(n, m) / std::pow(gain, 0.5 * total);
      for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= m; ++j) {
          if (i == n && j == m) continue;
          acc -= binomial(n, i) * binomial(m, j) * signal.at(i, j) * noise.at(m - j, n - i);
        }
      }
      signal.set(n, m, acc);
    }
  }
  return signal;
}

std::vector<double> wigner_from_moments(const MomentTable& moments,
                                        std::span<const std::complex<double>> grid) {
  if (moments.max_order() < 8)
    throw std::invalid_argument("wigner_from_moments: need max_order >= 8");

  constexpr int kNodes = 128;
  constexpr double kRadius = 6.0;
  const auto nodes_11 = gauss_legendre(kNodes);
  std::vector<double> xs(kNodes), ws(kNodes);
  for (int i = 0; i < kNodes; ++i) {
    xs[i] = kRadius * nodes_11[i].x;
    ws[i] = kRadius * nodes_11[i].w;
  }

  // Gaussian-damped characteristic kernels, full order and two orders less
  // for the truncation check. Independent of the evaluation point.
  const auto kernel_table = [&](int order) {
    std::vector<std::complex<double>> table(kNodes * kNodes);
    for (int ix = 0; ix < kNodes; ++ix) {
      for (int iy = 0; iy < kNodes; ++iy) {
        const std::complex<double> lambda{xs[ix], xs[iy]};
        std::complex<double> acc{0.0, 0.0};
        double inv_nfact = 1.0;
        for (int n = 0; n <= order; ++n) {
          if (n > 0) inv_nfact /= n;
          double inv_mfact = 1.0;
          for (int m = 0; n + m <= order; ++m) {
            if (m > 0) inv_mfact /= m;
            acc += moments.at(n, m) * std::pow(lambda, n) *
                   std::pow(-std::conj(lambda), m) * inv_nfact * inv_mfact;
          }
        }
        table[ix * kNodes + iy] = acc * std::exp(-0.5 * std::norm(lambda));
      }
    }
    return table;
  };
  const auto full = kernel_table(moments.max_order());
  const auto dropped = kernel_table(moments.max_order() - 2);

  std::vector<double> out;
  out.reserve(grid.size());
  const double inv_pi2 = 1.0 / (std::numbers::pi * std::numbers::pi);
  for (const auto& alpha : grid) {
    std::complex<double> acc_full{0.0, 0.0}, acc_drop{0.0, 0.0};
    for (int ix = 0; ix < kNodes; ++ix) {
      for (int iy = 0; iy < kNodes; ++iy) {
        const std::complex<double> lambda{xs[ix], xs[iy]};
        const std::complex<double> phase =
            std::exp(alpha * std::conj(lambda) - std::conj(alpha) * lambda);
        const double weight = ws[ix] * ws[iy];
        acc_full += weight * full[ix * kNodes + iy] * phase;
        acc_drop += weight * dropped[ix * kNodes + iy] * phase;
      }
    }
    const std::complex<double> w_full = inv_pi2 * acc_full;
    const std::complex<double> w_drop = inv_pi2 * acc_drop;
    if (std::abs(w_full.imag()) > 1e-6)
      throw std::runtime_error("wigner_from_moments: imaginary residue exceeds 1e-6");
    if (std::abs(w_full.real() - w_drop.real()) > 1e-3)
      throw std::runtime_error("wigner_from_moments: moment truncation not converged");
    out.push_back(w_full.real());
  }
  return out;
}

DualPathMoments dual_path_recover(const CrossMoments& cross_moments,
                                  const DualPathConfig& config) {
  if (!(config.gain > 0.0))
    throw std::invalid_argument("dual_path_recover: gain must be > 0");
  if (config.max_order < 1)
    throw std::invalid_argument("dual_path_recover: max_order must be >= 1");
  const int order = config.max_order;
  if (static_cast<int>(config.reference_moments.size()) < order + 1)
    throw std::invalid_argument("dual_path_recover: reference moments must reach max_order");
  if (std::abs(config.reference_moments[0] - 1.0) > 1e-12)
    throw std::invalid_argument("dual_path_recover: <V^0> must be 1");
  for (int j = 1; j <= order; j += 2)
    if (std::abs(config.reference_moments[j]) > 1e-12)
      throw std::invalid_argument("dual_path_recover: odd reference moments must vanish");

  const auto need = [&](int l, int m) -> double {
    const auto it = cross_moments.find({l, m});
    if (it == cross_moments.end())
      throw std::invalid_argument("dual_path_recover: missing cross-moment <C1^" +
                                  std::to_string(l) + " C2^" + std::to_string(m) + ">");
    return it->second;
  };
  const auto vmom = [&](int j) { return config.reference_moments[static_cast<std::size_t>(j)]; };

  DualPathMoments out;
  out.signal.assign(order + 1, 0.0);
  out.noise1.assign(order + 1, 0.0);
  out.noise2.assign(order + 1, 0.0);
  out.signal[0] = out.noise1[0] = out.noise2[0] = 1.0;

  for (int n = 1; n <= order; ++n) {
    const double gain_n = std::pow(config.gain, n);

    // <C1^{n-1} C2> / G^n expands over S^a V^b chi1^c with a+b+c = n-1 as
    // sum M(a,b,c) (-S[a+1] V[b] X1[c] + S[a] V[b+1] X1[c]); the highest
    // unknown is the (n-1,0,0) term of the first kind, -S[n].
    double acc = 0.0;
    for (int a = 0; a <= n - 1; ++a) {
      for (int b = 0; a + b <= n - 1; ++b) {
        const int c = n - 1 - a - b;
        const double mult = multinomial3(n - 1, a, b, c);
        acc += mult * out.signal[a] * vmom(b + 1) * out.noise1[c];
        if (a != n - 1) acc -= mult * out.signal[a + 1] * vmom(b) * out.noise1[c];
      }
    }
    out.signal[n] = acc - need(n - 1, 1) / gain_n;

    // <C1^n> / G^n = sum_{a+b+c=n} M(a,b,c) S[a] V[b] X1[c]; isolate c = n.
    double acc1 = need(n, 0) / gain_n;
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; a + b <= n; ++b) {
        const int c = n - a - b;
        if (c == n) continue;
        acc1 -= multinomial3(n, a, b, c) * out.signal[a] * vmom(b) * out.noise1[c];
      }
    }
    out.noise1[n] = acc1;

    // <C2^n> / G^n carries (-1)^a on the signal power.
    double acc2 = need(0, n) / gain_n;
    for (int a = 0; a <= n; ++a) {
      const double sign = (a % 2 == 0) ? 1.0 : -1.0;
      for (int b = 0; a + b <= n; ++b) {
        const int c = n - a - b;
        if (c == n) continue;
        acc2 -= sign * multinomial3(n, a, b, c) * out.signal[a] * vmom(b) * out.noise2[c];
      }
    }
    out.noise2[n] = acc2;
  }
  return out;
}

std::vector<double> central_moments(std::span<const double> raw) {
  if (raw.empty()) throw std::invalid_argument("central_moments: need order 0 upward");
  if (std::abs(raw[0] - 1.0) > 1e-12)
    throw std::invalid_argument("central_moments: raw[0] must be 1");
  const double mean = raw.size() > 1 ? raw[1] : 0.0;
  std::vector<double> central(raw.size(), 0.0);
  for (std::size_t n = 0; n < raw.size(); ++n) {
    double acc = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      const double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
      acc += binomial(static_cast<int>(n), static_cast<int>(k)) * sign * raw[k] *
             std::pow(mean, static_cast<double>(n - k));
    }
    central[n] = acc;
  }
  return central;
}

}  // namespace photonlink
