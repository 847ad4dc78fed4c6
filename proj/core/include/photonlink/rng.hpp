#pragma once

#include <cstdint>

// Counter-based random number generation: every draw is a strong 64-bit
// mix of (seed, stream, counter), so per-stream sequences are identical no
// matter which worker produces them or in what order.
namespace photonlink {

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double next_double();
  /// Standard normal (Box-Muller, pairs cached per stream).
  double next_gaussian();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

/// Exact Poisson sampling: sequential inversion below mean 30, transformed
/// rejection above. No normal approximation at any mean.
std::int64_t sample_poisson(double mean, CounterRng& rng);

/// Exact binomial sampling by Bernoulli thinning.
std::int64_t sample_binomial(std::int64_t n, double p, CounterRng& rng);

}  // namespace photonlink
