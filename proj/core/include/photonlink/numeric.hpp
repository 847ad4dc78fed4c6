#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

// Shared numerical kernels: Poisson pmf/tails, entropies, compensated
// summation, golden-section search and Gauss-Legendre nodes.
namespace photonlink {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Binary entropy in bits, with the 0 log 0 = 0 convention.
double binary_entropy(double x);

/// log of the Poisson pmf at count k for the given mean (natural log).
double log_poisson_pmf(std::int64_t k, double mean);

double poisson_pmf(std::int64_t k, double mean);

/// P(N >= m) for N ~ Poisson(mean). Series evaluation from the boundary
/// term, accurate to full double precision relative to the tail value.
double poisson_upper_tail(std::int64_t m, double mean);

/// P(N <= m) for N ~ Poisson(mean).
double poisson_lower_tail(std::int64_t m, double mean);

/// Count cutoff that captures a Poisson distribution's mass to well below
/// summation tolerances: mean + 10 sqrt(mean) + 20.
std::int64_t truncation_bound(double mean);

/// log(exp(a) + exp(b)) tolerating -inf arguments.
double log_sum_exp(double a, double b);

/// Kahan-compensated accumulator.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  void merge(const KahanSum& other) {
    add(other.s_);
    add(-other.c_);
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

struct ScalarMaximum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal (e.g. concave)
/// function on [lo, hi]. `tol` is the final bracket width in x.
ScalarMaximum golden_section_maximize(const std::function<double(double)>& f,
                                      double lo, double hi, double tol);

struct QuadratureNode {
  double x;
  double w;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
std::vector<QuadratureNode> gauss_legendre(int n);

/// Worker count for parallel regions: `requested` if positive, otherwise
/// hardware concurrency, both capped by the PHOTONLINK_THREADS variable.
int worker_count(int requested = 0);

/// Evaluates fn(i) for i in [0, n) across workers and returns the results
/// in index order, so reductions are deterministic for any worker count.
std::vector<double> parallel_map_ordered(std::int64_t n,
                                         const std::function<double(std::int64_t)>& fn,
                                         int workers = 0);

}  // namespace photonlink
