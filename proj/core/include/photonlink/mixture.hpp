#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

// Finite Poisson mixture model for doubly stochastic photon counting and
// its expectation-maximization estimator.
namespace photonlink {

struct PoissonMixture {
  std::vector<double> weights;  // sum to 1
  std::vector<double> means;    // all >= 0

  std::size_t components() const { return weights.size(); }
};

void validate_mixture(const PoissonMixture& model);

double mixture_pmf(std::int64_t count, const PoissonMixture& model);

double mixture_log_likelihood(std::span<const std::int64_t> samples,
                              const PoissonMixture& model);

enum class EmStatus { converged, max_iterations, degenerate };

struct EmResult {
  PoissonMixture model;
  double log_likelihood = 0.0;
  int iterations = 0;
  EmStatus status = EmStatus::converged;
};

/// EM for Poisson mixtures. Deterministic auto-initialization (k-quantile
/// means, uniform weights) when no starting model is given. Stops when the
/// relative log-likelihood change drops below tol. Requesting more
/// components than there are distinct sample values is flagged as a
/// degenerate fit.
EmResult em_fit(std::span<const std::int64_t> samples, int k,
                const std::optional<PoissonMixture>& init = std::nullopt,
                int max_iterations = 1000, double tol = 1e-10);

}  // namespace photonlink
