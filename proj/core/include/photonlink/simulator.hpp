#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "photonlink/hbt_channel.hpp"
#include "photonlink/radiometry.hpp"
#include "photonlink/rng.hpp"

// Monte Carlo link simulation: symbol generation, exact Poisson count
// sampling (with an explicit thinning path for the equivalence check),
// threshold/MAP detection and empirical-versus-analytic reporting.
// Per-symbol randomness comes from counter-based streams keyed by
// (seed, symbol index), so reports are bit-identical for any worker count.
namespace photonlink {

enum class ChannelKind { poisson, hbt };
enum class DetectorKind { threshold, map };

struct SimConfig {
  SlotStatistics stats;
  ChannelKind channel_kind = ChannelKind::poisson;
  std::optional<HbtChannelParams> hbt_params;
  double prior_one = 0.5;
  std::int64_t n_symbols = 1;
  std::uint64_t seed = 0;
  DetectorKind detector = DetectorKind::threshold;
  std::int64_t threshold = 0;
  bool thinning_path = false;  // sample the full count, then binomial-thin
  int workers = 1;             // 0 = auto (capped by PHOTONLINK_THREADS)
};

struct SimReport {
  std::int64_t n_symbols = 0;
  std::int64_t n_errors = 0;
  double empirical_error_rate = 0.0;
  double error_rate_stderr = 0.0;  // binomial standard error
  double analytic_error_rate = 0.0;
  std::map<CountTriple, std::int64_t> counts_histogram;  // poisson counts in n00
  double empirical_mi_estimate = 0.0;  // plug-in estimate from the joint histogram
};

void validate_sim_config(const SimConfig& config);

/// Detected count for one slot. The thinning path draws the full Poisson
/// count and thins it binomially with the capture probability; the direct
/// path draws Poisson(capture * mean) in one step.
std::int64_t sample_poisson_count(int symbol, const SimConfig& config, CounterRng& rng);

/// Three independent per-outcome Poisson counts for the HBT channel.
CountTriple sample_hbt_counts(int symbol, const SimConfig& config, CounterRng& rng);

/// Threshold rule (1 iff count >= threshold) or MAP rule; MAP ties go to 0.
int detect(std::int64_t count, const SimConfig& config);
int detect(const CountTriple& counts, const SimConfig& config);

/// Exact error rate of the configured detector.
double analytic_error_rate(const SimConfig& config);

SimReport run_simulation(const SimConfig& config);

}  // namespace photonlink
