#include "photonlink/numeric.hpp"

#include <algorithm>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace photonlink {

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double log_poisson_pmf(std::int64_t k, double mean) {
  if (k < 0) return kNegInf;
  if (mean == 0.0) return k == 0 ? 0.0 : kNegInf;
  return static_cast<double>(k) * std::log(mean) - mean -
         std::lgamma(static_cast<double>(k) + 1.0);
}

double poisson_pmf(std::int64_t k, double mean) {
  return std::exp(log_poisson_pmf(k, mean));
}

double poisson_upper_tail(std::int64_t m, double mean) {
  if (m <= 0) return 1.0;
  if (mean <= 0.0) return 0.0;
  if (static_cast<double>(m) > mean) {
    // Ascending series from the boundary term; ratio mean/k < 1 throughout.
    double sum = 1.0;
    double term = 1.0;
    for (std::int64_t k = m + 1;; ++k) {
      term *= mean / static_cast<double>(k);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return std::exp(log_poisson_pmf(m, mean)) * sum;
  }
  return 1.0 - poisson_lower_tail(m - 1, mean);
}

double poisson_lower_tail(std::int64_t m, double mean) {
  if (m < 0) return 0.0;
  if (mean <= 0.0) return 1.0;
  if (static_cast<double>(m) < mean) {
    // Descending series; terminates after at most m terms.
    double sum = 1.0;
    double term = 1.0;
    for (std::int64_t k = m; k > 0; --k) {
      term *= static_cast<double>(k) / mean;
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return std::exp(log_poisson_pmf(m, mean)) * sum;
  }
  return 1.0 - poisson_upper_tail(m + 1, mean);
}

std::int64_t truncation_bound(double mean) {
  if (mean < 0.0) throw std::invalid_argument("truncation_bound: negative mean");
  return static_cast<std::int64_t>(std::ceil(mean + 10.0 * std::sqrt(mean) + 20.0));
}

double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

ScalarMaximum golden_section_maximize(const std::function<double(double)>& f,
                                      double lo, double hi, double tol) {
  if (!(hi >= lo)) throw std::invalid_argument("golden_section_maximize: bad bracket");
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

std::vector<QuadratureNode> gauss_legendre(int n) {
  if (n < 2) throw std::invalid_argument("gauss_legendre: need at least 2 nodes");
  std::vector<QuadratureNode> nodes(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration from the Chebyshev-based initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = {-x, w};
    nodes[n - 1 - i] = {x, w};
  }
  return nodes;
}

int worker_count(int requested) {
  int n = requested > 0 ? requested
                        : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("PHOTONLINK_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

std::vector<double> parallel_map_ordered(std::int64_t n,
                                         const std::function<double(std::int64_t)>& fn,
                                         int workers) {
  std::vector<double> out(static_cast<std::size_t>(std::max<std::int64_t>(n, 0)));
  if (n <= 0) return out;
  const int w = std::min<std::int64_t>(worker_count(workers), n);
  if (w == 1) {
    for (std::int64_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (int t = 0; t < w; ++t) {
    pool.emplace_back([&, t]() {
      for (std::int64_t i = t; i < n; i += w) out[i] = fn(i);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace photonlink
