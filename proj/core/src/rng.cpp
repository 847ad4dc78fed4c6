#include "photonlink/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace photonlink {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) {
  key_ = mix64(seed + kGolden) ^ mix64(stream * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL);
}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double CounterRng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  double u1 = next_double();
  while (u1 <= 0.0) u1 = next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_gaussian_ = r * std::sin(theta);
  has_cached_gaussian_ = true;
  return r * std::cos(theta);
}

std::int64_t sample_poisson(double mean, CounterRng& rng) {
  if (mean < 0.0) throw std::invalid_argument("sample_poisson: mean must be >= 0");
  if (mean == 0.0) return 0;

  if (mean < 30.0) {
    // Sequential inversion.
    const double u = rng.next_double();
    double p = std::exp(-mean);
    double cum = p;
    std::int64_t k = 0;
    while (u > cum) {
      ++k;
      p *= mean / static_cast<double>(k);
      cum += p;
      if (k > 10000) break;
    }
    return k;
  }

  // Hormann's PTRS transformed rejection; exact for any mean.
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    double u = rng.next_double() - 0.5;
    double v = rng.next_double();
    const double us = 0.5 - std::abs(u);
    const auto k = static_cast<std::int64_t>(
        std::floor((2.0 * a / us + b) * u + mean + 0.43));
    if (us >= 0.07 && v <= v_r) return k;
    if (k < 0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs =
        static_cast<double>(k) * log_mean - mean - std::lgamma(static_cast<double>(k) + 1.0);
    if (lhs <= rhs) return k;
  }
}

std::int64_t sample_binomial(std::int64_t n, double p, CounterRng& rng) {
  if (n < 0) throw std::invalid_argument("sample_binomial: n must be >= 0");
  if (p <= 0.0) return 0;
  if (p >= 1.0) return n;
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < n; ++i)
    if (rng.next_double() < p) ++hits;
  return hits;
}

}  // namespace photonlink
