#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "photonlink/radiometry.hpp"

// Thinned-Poisson on-off-keying channel: per-symbol count laws, the
// hard-decision binary asymmetric channel and its optimal prior, soft
// (count-level) mutual information and rate-versus-power sweeps.
namespace photonlink {

/// Hard-decision crossovers: p1 = P(Y=1 | X=1), p2 = P(Y=0 | X=0).
struct BinaryChannel {
  double p1 = 0.0;
  double p2 = 0.0;
};

struct HardDecisionConfig {
  std::int64_t threshold = 0;
  double prior_one = 0.5;
};

/// Mean detected count for the given symbol: capture_prob * (signal +
/// background) for one, capture_prob * background for zero.
double symbol_mean(int symbol, const SlotStatistics& stats);

/// Poisson pmf of the detected count conditioned on the sent symbol.
double symbol_pmf(std::int64_t count, int symbol, const SlotStatistics& stats);

/// Crossover pair of the threshold detector deciding one iff count >= threshold.
BinaryChannel crossover_probs(const SlotStatistics& stats, std::int64_t threshold);

/// Mutual information of the binary asymmetric channel in bits.
double bac_mutual_information(const BinaryChannel& ch, double prior_one);

/// Closed-form capacity-achieving output law for the binary asymmetric
/// channel, with the implied input prior cross-checked against a direct
/// concave maximization. For a degenerate channel (p1 + p2 = 1) the
/// capacity is zero and prior_star is NaN.
struct OptimalOutput {
  double p_y_star = 0.5;       // optimal P(Y = 1)
  double prior_star = 0.5;     // prior implied by the closed form, clamped to [0, 1]
  double prior_numeric = 0.5;  // golden-section maximizer of the mutual information
  double mi_closed_form = 0.0; // bits at prior_star
  double mi_numeric = 0.0;     // bits at prior_numeric
  bool consistent = true;      // |mi_numeric - mi_closed_form| <= 1e-6
};
OptimalOutput optimal_output_prob(const BinaryChannel& ch);

/// Mutual information between the symbol and the raw detected count.
double soft_mutual_information(const SlotStatistics& stats, double prior_one);

struct HardDecisionDesign {
  std::int64_t threshold = 0;
  double prior = 0.5;
  double rate_bits = 0.0;
};

/// Best threshold/prior pair: scans thresholds up to the count truncation
/// bound, maximizing the prior by golden section at each; ties go to the
/// smaller threshold.
HardDecisionDesign optimize_hard_decision(const SlotStatistics& stats);

enum class RateMode { hard, soft };

struct RatePoint {
  double power_dbm = 0.0;
  std::int64_t threshold = -1;  // -1 in soft mode
  double prior = 0.5;
  double rate_bits = 0.0;
};

/// Achievable rate per sweep point; propagates per-point failures with the
/// point index in the message.
std::vector<RatePoint> rate_curve(std::span<const LinkBudget> budgets, RateMode mode);

}  // namespace photonlink
