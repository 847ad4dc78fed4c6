#include "photonlink/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "photonlink/numeric.hpp"

namespace photonlink {

namespace {

constexpr double kMeanFloor = 1e-9;  // keeps log pmf finite for emptied components

std::vector<double> log_component_weights(const PoissonMixture& model) {
  std::vector<double> lw(model.components());
  for (std::size_t k = 0; k < model.components(); ++k)
    lw[k] = model.weights[k] > 0.0 ? std::log(model.weights[k]) : kNegInf;
  return lw;
}

double sample_log_mix(std::int64_t count, const PoissonMixture& model,
                      const std::vector<double>& lw) {
  double acc = kNegInf;
  for (std::size_t k = 0; k < model.components(); ++k)
    acc = log_sum_exp(acc, lw[k] + log_poisson_pmf(count, model.means[k]));
  return acc;
}

}  // namespace

void validate_mixture(const PoissonMixture& model) {
  if (model.weights.empty() || model.weights.size() != model.means.size())
    throw std::invalid_argument("mixture: need matching, nonempty weights and means");
  double sum = 0.0;
  for (const double w : model.weights) {
    if (w < 0.0) throw std::invalid_argument("mixture: weights must be >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("mixture: weights must sum to 1");
  for (const double m : model.means)
    if (m < 0.0) throw std::invalid_argument("mixture: means must be >= 0");
}

double mixture_pmf(std::int64_t count, const PoissonMixture& model) {
  validate_mixture(model);
  if (count < 0) return 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < model.components(); ++k)
    acc += model.weights[k] * poisson_pmf(count, model.means[k]);
  return acc;
}

double mixture_log_likelihood(std::span<const std::int64_t> samples,
                              const PoissonMixture& model) {
  validate_mixture(model);
  const auto lw = log_component_weights(model);
  KahanSum ll;
  for (const std::int64_t n : samples) ll.add(sample_log_mix(n, model, lw));
  return ll.value();
}

EmResult em_fit(std::span<const std::int64_t> samples, int k,
                const std::optional<PoissonMixture>& init, int max_iterations, double tol) {
  if (samples.empty()) throw std::invalid_argument("em_fit: no samples");
  if (k < 1) throw std::invalid_argument("em_fit: k must be >= 1");
  for (const std::int64_t n : samples)
    if (n < 0) throw std::invalid_argument("em_fit: counts must be >= 0");

  EmResult result;
  if (init) {
    if (static_cast<int>(init->components()) != k)
      throw std::invalid_argument("em_fit: init component count differs from k");
    validate_mixture(*init);
    result.model = *init;
  } else {
    // k-quantile means over the sorted sample, uniform weights.
    std::vector<std::int64_t> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    result.model.weights.assign(k, 1.0 / k);
    result.model.means.resize(k);
    for (int j = 0; j < k; ++j) {
      const auto idx = static_cast<std::size_t>(
          (2.0 * j + 1.0) / (2.0 * k) * static_cast<double>(sorted.size() - 1));
      result.model.means[j] =
          std::max(kMeanFloor, static_cast<double>(sorted[idx]) + 1e-6 * j);
    }
  }

  std::size_t distinct = 1;
  {
    std::vector<std::int64_t> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
      if (sorted[i] != sorted[i - 1]) ++distinct;
  }
  const bool degenerate = static_cast<std::size_t>(k) > distinct;

  const std::size_t n_samples = samples.size();
  std::vector<double> resp(static_cast<std::size_t>(k));
  double prev_ll = mixture_log_likelihood(samples, result.model);
  result.status = EmStatus::max_iterations;

  for (int iter = 1; iter <= max_iterations; ++iter) {
    std::vector<double> weight_acc(static_cast<std::size_t>(k), 0.0);
    std::vector<double> count_acc(static_cast<std::size_t>(k), 0.0);
    const auto lw = log_component_weights(result.model);

    for (const std::int64_t n : samples) {
      const double lmix = sample_log_mix(n, result.model, lw);
      for (int j = 0; j < k; ++j) {
        const double lr = lw[j] + log_poisson_pmf(n, result.model.means[j]) - lmix;
        resp[j] = std::exp(lr);
      }
      for (int j = 0; j < k; ++j) {
        weight_acc[j] += resp[j];
        count_acc[j] += resp[j] * static_cast<double>(n);
      }
    }

    for (int j = 0; j < k; ++j) {
      result.model.weights[j] = weight_acc[j] / static_cast<double>(n_samples);
      result.model.means[j] =
          weight_acc[j] > 0.0 ? std::max(kMeanFloor, count_acc[j] / weight_acc[j]) : kMeanFloor;
    }
    // squash rounding drift in the weight sum
    double wsum = 0.0;
    for (const double w : result.model.weights) wsum += w;
    for (double& w : result.model.weights) w /= wsum;

    const double ll = mixture_log_likelihood(samples, result.model);
    if (ll < prev_ll - 1e-10 * std::max(1.0, std::abs(prev_ll)))
      throw std::logic_error("em_fit: log-likelihood decreased");
    result.iterations = iter;
    const double rel_change = std::abs(ll - prev_ll) / std::max(1.0, std::abs(ll));
    prev_ll = ll;
    if (rel_change < tol) {
      result.status = EmStatus::converged;
      break;
    }
  }

  result.log_likelihood = prev_ll;
  if (degenerate) result.status = EmStatus::degenerate;
  return result;
}

}  // namespace photonlink
