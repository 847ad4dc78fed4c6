#include "photonlink/poisson_channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "photonlink/numeric.hpp"

namespace photonlink {

namespace {

constexpr double kLog2E = 1.4426950408889634;

void validate_stats(const SlotStatistics& stats) {
  if (stats.lambda_sig < 0.0 || stats.lambda_bg < 0.0)
    throw std::invalid_argument("slot statistics: photon means must be >= 0");
  if (stats.capture_prob < 0.0 || stats.capture_prob > 1.0)
    throw std::invalid_argument("slot statistics: capture_prob must be in [0, 1]");
}

void validate_prior(double prior_one) {
  if (!(prior_one >= 0.0 && prior_one <= 1.0))
    throw std::invalid_argument("prior_one must be in [0, 1]");
}

void validate_channel(const BinaryChannel& ch) {
  if (!(ch.p1 >= 0.0 && ch.p1 <= 1.0 && ch.p2 >= 0.0 && ch.p2 <= 1.0))
    throw std::invalid_argument("binary channel: p1, p2 must be in [0, 1]");
}

}  // namespace

double symbol_mean(int symbol, const SlotStatistics& stats) {
  validate_stats(stats);
  const double base = symbol ? stats.lambda_sig + stats.lambda_bg : stats.lambda_bg;
  return stats.capture_prob * base;
}

double symbol_pmf(std::int64_t count, int symbol, const SlotStatistics& stats) {
  return poisson_pmf(count, symbol_mean(symbol, stats));
}

BinaryChannel crossover_probs(const SlotStatistics& stats, std::int64_t threshold) {
  if (threshold < 0) throw std::invalid_argument("crossover_probs: threshold must be >= 0");
  BinaryChannel ch;
  ch.p1 = poisson_upper_tail(threshold, symbol_mean(1, stats));
  ch.p2 = poisson_lower_tail(threshold - 1, symbol_mean(0, stats));
  return ch;
}

double bac_mutual_information(const BinaryChannel& ch, double prior_one) {
  validate_channel(ch);
  validate_prior(prior_one);
  const double p_out = prior_one * ch.p1 + (1.0 - prior_one) * (1.0 - ch.p2);
  return binary_entropy(p_out) - prior_one * binary_entropy(ch.p1) -
         (1.0 - prior_one) * binary_entropy(ch.p2);
}

OptimalOutput optimal_output_prob(const BinaryChannel& ch) {
  validate_channel(ch);
  OptimalOutput out;
  const double denom = ch.p1 + ch.p2 - 1.0;
  if (std::abs(denom) < 1e-12) {
    // Output independent of input: capacity 0, no meaningful prior.
    out.p_y_star = 0.5;
    out.prior_star = std::numeric_limits<double>::quiet_NaN();
    out.prior_numeric = 0.5;
    out.mi_closed_form = 0.0;
    out.mi_numeric = 0.0;
    out.consistent = true;
    return out;
  }
  const double h1 = binary_entropy(ch.p1);
  const double h2 = binary_entropy(ch.p2);
  out.p_y_star = 1.0 / (1.0 + std::exp2((h1 - h2) / denom));
  double prior = (out.p_y_star - (1.0 - ch.p2)) / denom;
  prior = std::min(1.0, std::max(0.0, prior));
  out.prior_star = prior;
  const auto numeric = golden_section_maximize(
      [&](double g) { return bac_mutual_information(ch, g); }, 0.0, 1.0, 1e-10);
  out.prior_numeric = numeric.x;
  out.mi_closed_form = bac_mutual_information(ch, prior);
  out.mi_numeric = numeric.value;
  out.consistent = std::abs(out.mi_numeric - out.mi_closed_form) <= 1e-6;
  return out;
}

double soft_mutual_information(const SlotStatistics& stats, double prior_one) {
  validate_prior(prior_one);
  const double mean_on = symbol_mean(1, stats);
  const double mean_off = symbol_mean(0, stats);
  if (prior_one == 0.0 || prior_one == 1.0 || mean_on == mean_off) return 0.0;

  const std::int64_t kmax = truncation_bound(mean_on);
  const double lg1 = std::log(prior_one);
  const double lg0 = std::log(1.0 - prior_one);
  KahanSum bits;
  for (std::int64_t n = 0; n <= kmax; ++n) {
    const double l1 = log_poisson_pmf(n, mean_on);
    const double l0 = log_poisson_pmf(n, mean_off);
    const double lmix = log_sum_exp(lg1 + l1, lg0 + l0);
    const double q1 = std::exp(l1);
    const double q0 = std::exp(l0);
    if (q1 > 0.0) bits.add(prior_one * q1 * (l1 - lmix) * kLog2E);
    if (q0 > 0.0) bits.add((1.0 - prior_one) * q0 * (l0 - lmix) * kLog2E);
  }
  return bits.value();
}

HardDecisionDesign optimize_hard_decision(const SlotStatistics& stats) {
  const double mean_on = symbol_mean(1, stats);
  const std::int64_t kmax = truncation_bound(mean_on);
  HardDecisionDesign best;
  best.rate_bits = -1.0;
  for (std::int64_t m = 0; m <= kmax; ++m) {
    const BinaryChannel ch = crossover_probs(stats, m);
    const auto opt = golden_section_maximize(
        [&](double g) { return bac_mutual_information(ch, g); }, 0.0, 1.0, 1e-10);
    if (opt.value > best.rate_bits) best = {m, opt.x, opt.value};
  }
  if (best.rate_bits < 0.0) best.rate_bits = 0.0;
  return best;
}

std::vector<RatePoint> rate_curve(std::span<const LinkBudget> budgets, RateMode mode) {
  if (budgets.empty()) throw std::invalid_argument("rate_curve: empty sweep");
  std::vector<RatePoint> out;
  out.reserve(budgets.size());
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    try {
      const SlotStatistics stats = slot_statistics(budgets[i]);
      RatePoint pt;
      pt.power_dbm = budgets[i].power_dbm;
      if (mode == RateMode::hard) {
        const auto design = optimize_hard_decision(stats);
        pt.threshold = design.threshold;
        pt.prior = design.prior;
        pt.rate_bits = design.rate_bits;
      } else {
        const auto opt = golden_section_maximize(
            [&](double g) { return soft_mutual_information(stats, g); }, 0.0, 1.0, 1e-10);
        pt.threshold = -1;
        pt.prior = opt.x;
        pt.rate_bits = opt.value;
      }
      out.push_back(pt);
    } catch (const std::exception& e) {
      throw std::runtime_error("rate_curve: point " + std::to_string(i) + " (" +
                               std::to_string(budgets[i].power_dbm) + " dBm): " + e.what());
    }
  }
  return out;
}

}  // namespace photonlink
