#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "photonlink/radiometry.hpp"

// Dual-path HBT channel: the receiver observes three independent Poisson
// event counts per slot, one per branch outcome {00, 01, 10}, whose means
// mix the coherent (signal) and thermal (background) outcome probabilities.
namespace photonlink {

struct HbtChannelParams {
  std::array<double, 3> coherent_probs{};  // outcome order {00, 01, 10}
  std::array<double, 3> thermal_probs{};
  SlotStatistics stats;
};

struct CountTriple {
  std::int64_t n00 = 0;
  std::int64_t n01 = 0;
  std::int64_t n10 = 0;

  auto operator<=>(const CountTriple&) const = default;
};

class hbt_truncation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws std::invalid_argument on invariant violations. With
/// `require_symmetric`, additionally checks the 01/10 symmetry of both
/// probability triples.
void validate_hbt_params(const HbtChannelParams& params, bool require_symmetric = false);

/// Per-outcome event-count means conditioned on the symbol.
std::array<double, 3> hbt_means(int symbol, const HbtChannelParams& params);

/// Product of the three per-outcome Poisson pmfs.
double conditional_pmf(const CountTriple& counts, int symbol, const HbtChannelParams& params);

struct HbtMiOptions {
  bool audit = true;          // compare against an enlarged summation box
  double box_sigmas = 10.0;   // per-axis box half-width in units of sqrt(mean)
  double audit_extra_sigmas = 5.0;
};

/// Mutual information in bits between the symbol and the count triple,
/// summed over a per-axis truncation box (half-width box_sigmas *
/// sqrt(mean) + 20, clipped at zero) with compensated accumulation.
/// Throws hbt_truncation_error if the audit box disagrees beyond 1e-8.
double hbt_mutual_information(const HbtChannelParams& params, double prior_one,
                              const HbtMiOptions& options = {});

struct PriorDesign {
  double prior_star = 0.5;
  double rate_bits = 0.0;
};

/// Golden-section maximization of the mutual information over the prior
/// (valid by concavity), tolerance 1e-10 in the prior. The search runs on
/// a log-likelihood-ratio aggregation of the summation grid; the returned
/// rate is the exact grid sum at the optimum.
PriorDesign optimal_prior(const HbtChannelParams& params);

struct HbtRatePoint {
  double power_dbm = 0.0;
  double prior = 0.5;
  double rate_bits = 0.0;
};

/// Rate sweep with the template's probability triples and per-budget slot
/// statistics. Propagates per-point failures with the point index.
std::vector<HbtRatePoint> hbt_rate_curve(std::span<const LinkBudget> budgets,
                                         const HbtChannelParams& params_template);

}  // namespace photonlink
