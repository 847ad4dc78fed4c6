#include "photonlink/simulator.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "photonlink/numeric.hpp"
#include "photonlink/poisson_channel.hpp"

namespace photonlink {

namespace {

double log_prior(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

int detect_map_poisson(std::int64_t count, const SimConfig& config) {
  const double mean_on = symbol_mean(1, config.stats);
  const double mean_off = symbol_mean(0, config.stats);
  const double l1 = log_prior(config.prior_one) + log_poisson_pmf(count, mean_on);
  const double l0 = log_prior(1.0 - config.prior_one) + log_poisson_pmf(count, mean_off);
  return l1 > l0 ? 1 : 0;
}

int detect_map_hbt(const CountTriple& counts, const SimConfig& config) {
  const auto& params = *config.hbt_params;
  const auto on = hbt_means(1, params);
  const auto off = hbt_means(0, params);
  double l1 = log_prior(config.prior_one);
  double l0 = log_prior(1.0 - config.prior_one);
  const std::int64_t ks[3] = {counts.n00, counts.n01, counts.n10};
  for (int i = 0; i < 3; ++i) {
    l1 += log_poisson_pmf(ks[i], on[i]);
    l0 += log_poisson_pmf(ks[i], off[i]);
  }
  return l1 > l0 ? 1 : 0;
}

double analytic_error_poisson_map(const SimConfig& config) {
  const double mean_on = symbol_mean(1, config.stats);
  const double mean_off = symbol_mean(0, config.stats);
  const std::int64_t kmax = truncation_bound(mean_on);
  // The likelihood ratio is monotone in the count, so the MAP region for
  // symbol one is an upper tail; find its boundary.
  std::int64_t first_one = kmax + 1;
  for (std::int64_t n = 0; n <= kmax; ++n) {
    if (detect(n, config) == 1) {
      first_one = n;
      break;
    }
  }
  const double miss = poisson_lower_tail(first_one - 1, mean_on);
  const double false_alarm = poisson_upper_tail(first_one, mean_off);
  return config.prior_one * miss + (1.0 - config.prior_one) * false_alarm;
}

double analytic_error_hbt_map(const SimConfig& config) {
  const auto& params = *config.hbt_params;
  const auto on = hbt_means(1, params);
  const auto off = hbt_means(0, params);
  std::array<std::int64_t, 3> lo{}, hi{};
  for (int i = 0; i < 3; ++i) {
    lo[i] = std::max<std::int64_t>(
        0, static_cast<std::int64_t>(std::floor(
               std::min(on[i] - 10.0 * std::sqrt(on[i]), off[i] - 10.0 * std::sqrt(off[i])) -
               20.0)));
    hi[i] = std::max(truncation_bound(on[i]), truncation_bound(off[i]));
  }
  KahanSum err;
  CountTriple k;
  for (k.n00 = lo[0]; k.n00 <= hi[0]; ++k.n00) {
    for (k.n01 = lo[1]; k.n01 <= hi[1]; ++k.n01) {
      for (k.n10 = lo[2]; k.n10 <= hi[2]; ++k.n10) {
        const int decision = detect(k, config);
        if (decision == 0)
          err.add(config.prior_one * conditional_pmf(k, 1, params));
        else
          err.add((1.0 - config.prior_one) * conditional_pmf(k, 0, params));
      }
    }
  }
  return err.value();
}

struct Tally {
  std::int64_t errors = 0;
  std::map<std::pair<int, CountTriple>, std::int64_t> joint;
};

Tally simulate_range(const SimConfig& config, std::int64_t begin, std::int64_t end) {
  Tally tally;
  for (std::int64_t i = begin; i < end; ++i) {
    CounterRng rng(config.seed, static_cast<std::uint64_t>(i));
    const int x = rng.next_double() < config.prior_one ? 1 : 0;
    CountTriple obs{};
    int y = 0;
    if (config.channel_kind == ChannelKind::poisson) {
      obs.n00 = sample_poisson_count(x, config, rng);
      y = detect(obs.n00, config);
    } else {
      obs = sample_hbt_counts(x, config, rng);
      y = detect(obs, config);
    }
    if (y != x) ++tally.errors;
    ++tally.joint[{x, obs}];
  }
  return tally;
}

}  // namespace

void validate_sim_config(const SimConfig& config) {
  if (config.n_symbols < 1)
    throw std::invalid_argument("sim config: n_symbols must be >= 1");
  if (!(config.prior_one >= 0.0 && config.prior_one <= 1.0))
    throw std::invalid_argument("sim config: prior_one must be in [0, 1]");
  if (config.threshold < 0)
    throw std::invalid_argument("sim config: threshold must be >= 0");
  if (config.stats.lambda_sig < 0.0 || config.stats.lambda_bg < 0.0 ||
      config.stats.capture_prob < 0.0 || config.stats.capture_prob > 1.0)
    throw std::invalid_argument("sim config: invalid slot statistics");
  if (config.channel_kind == ChannelKind::hbt) {
    if (!config.hbt_params)
      throw std::invalid_argument("sim config: hbt channel needs hbt_params");
    validate_hbt_params(*config.hbt_params);
    if (config.detector == DetectorKind::threshold)
      throw std::invalid_argument("sim config: hbt channel supports the map detector only");
  }
}

std::int64_t sample_poisson_count(int symbol, const SimConfig& config, CounterRng& rng) {
  const double full_mean =
      symbol ? config.stats.lambda_sig + config.stats.lambda_bg : config.stats.lambda_bg;
  if (config.thinning_path) {
    const std::int64_t arrivals = sample_poisson(full_mean, rng);
    return sample_binomial(arrivals, config.stats.capture_prob, rng);
  }
  return sample_poisson(config.stats.capture_prob * full_mean, rng);
}

CountTriple sample_hbt_counts(int symbol, const SimConfig& config, CounterRng& rng) {
  if (!config.hbt_params)
    throw std::invalid_argument("sample_hbt_counts: hbt_params missing");
  const auto means = hbt_means(symbol, *config.hbt_params);
  CountTriple out;
  out.n00 = sample_poisson(means[0], rng);
  out.n01 = sample_poisson(means[1], rng);
  out.n10 = sample_poisson(means[2], rng);
  return out;
}

int detect(std::int64_t count, const SimConfig& config) {
  if (config.detector == DetectorKind::threshold)
    return count >= config.threshold ? 1 : 0;
  return detect_map_poisson(count, config);
}

int detect(const CountTriple& counts, const SimConfig& config) {
  if (config.detector == DetectorKind::threshold)
    throw std::invalid_argument("detect: no threshold rule for count triples");
  return detect_map_hbt(counts, config);
}

double analytic_error_rate(const SimConfig& config) {
  validate_sim_config(config);
  if (config.channel_kind == ChannelKind::poisson) {
    if (config.detector == DetectorKind::threshold) {
      const BinaryChannel ch = crossover_probs(config.stats, config.threshold);
      return config.prior_one * (1.0 - ch.p1) + (1.0 - config.prior_one) * (1.0 - ch.p2);
    }
    return analytic_error_poisson_map(config);
  }
  return analytic_error_hbt_map(config);
}

SimReport run_simulation(const SimConfig& config) {
  validate_sim_config(config);
  const std::int64_t n = config.n_symbols;
  const int workers = std::min<std::int64_t>(worker_count(config.workers), n);

  std::vector<Tally> tallies(workers);
  if (workers == 1) {
    tallies[0] = simulate_range(config, 0, n);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
      const std::int64_t begin = n * t / workers;
      const std::int64_t end = n * (t + 1) / workers;
      pool.emplace_back(
          [&, t, begin, end]() { tallies[t] = simulate_range(config, begin, end); });
    }
    for (auto& th : pool) th.join();
  }

  Tally total;
  for (const auto& t : tallies) {
    total.errors += t.errors;
    for (const auto& [key, c] : t.joint) total.joint[key] += c;
  }

  SimReport report;
  report.n_symbols = n;
  report.n_errors = total.errors;
  report.empirical_error_rate = static_cast<double>(total.errors) / static_cast<double>(n);
  report.error_rate_stderr = std::sqrt(
      std::max(0.0, report.empirical_error_rate * (1.0 - report.empirical_error_rate) /
                        static_cast<double>(n)));
  report.analytic_error_rate = analytic_error_rate(config);

  std::map<int, std::int64_t> x_marginal;
  std::map<CountTriple, std::int64_t> obs_marginal;
  for (const auto& [key, c] : total.joint) {
    x_marginal[key.first] += c;
    obs_marginal[key.second] += c;
    report.counts_histogram[key.second] += c;
  }
  double mi = 0.0;
  const double dn = static_cast<double>(n);
  for (const auto& [key, c] : total.joint) {
    const double p_joint = static_cast<double>(c) / dn;
    const double p_x = static_cast<double>(x_marginal[key.first]) / dn;
    const double p_o = static_cast<double>(obs_marginal[key.second]) / dn;
    mi += p_joint * std::log2(p_joint / (p_x * p_o));
  }
  report.empirical_mi_estimate = mi;
  return report;
}

}  // namespace photonlink
