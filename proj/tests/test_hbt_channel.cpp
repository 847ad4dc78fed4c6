#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <map>
#include <vector>

#include "photonlink/hbt_channel.hpp"
#include "photonlink/numeric.hpp"
#include "photonlink/rng.hpp"
#include "photonlink/simulator.hpp"

using namespace photonlink;

namespace {

HbtChannelParams small_params(double lambda_sig, double lambda_bg) {
  HbtChannelParams params;
  params.coherent_probs = {0.25, 0.25, 0.25};
  params.thermal_probs = {0.36, 0.07, 0.07};
  params.stats = {lambda_sig, lambda_bg, 1.0};
  return params;
}

// Direct mixture-entropy evaluation over a generous box; small means only.
double brute_force_mi(const HbtChannelParams& params, double prior) {
  const auto on = hbt_means(1, params);
  const auto off = hbt_means(0, params);
  std::array<std::int64_t, 3> hi{};
  for (int i = 0; i < 3; ++i) hi[i] = truncation_bound(std::max(on[i], off[i])) + 10;
  double h_out = 0.0, h_on = 0.0, h_off = 0.0;
  CountTriple k;
  for (k.n00 = 0; k.n00 <= hi[0]; ++k.n00) {
    for (k.n01 = 0; k.n01 <= hi[1]; ++k.n01) {
      for (k.n10 = 0; k.n10 <= hi[2]; ++k.n10) {
        const double q1 = conditional_pmf(k, 1, params);
        const double q0 = conditional_pmf(k, 0, params);
        const double mix = prior * q1 + (1.0 - prior) * q0;
        if (mix > 0.0) h_out -= mix * std::log2(mix);
        if (q1 > 0.0) h_on -= q1 * std::log2(q1);
        if (q0 > 0.0) h_off -= q0 * std::log2(q0);
      }
    }
  }
  return h_out - prior * h_on - (1.0 - prior) * h_off;
}

// P(chi2_df > stat) for even df, via the Poisson identity.
double chi_square_p_value_even_df(int df, double stat) {
  REQUIRE(df % 2 == 0);
  return poisson_lower_tail(df / 2 - 1, stat / 2.0);
}

}  // namespace

TEST_CASE("conditional pmf reference values") {
  HbtChannelParams params;
  params.coherent_probs = {0.25, 0.25, 0.25};
  params.thermal_probs = {0.25, 0.25, 0.25};
  params.stats = {0.0, 4.0, 1.0};  // thermal means (1, 1, 1)
  CHECK(conditional_pmf({0, 0, 0}, 0, params) ==
        doctest::Approx(std::exp(-3.0)).epsilon(1e-9));
}

TEST_CASE("no signal collapses the two conditionals") {
  const auto params = small_params(0.0, 2.0);
  CountTriple k;
  for (k.n00 = 0; k.n00 <= 4; ++k.n00)
    for (k.n01 = 0; k.n01 <= 4; ++k.n01)
      for (k.n10 = 0; k.n10 <= 4; ++k.n10)
        CHECK(conditional_pmf(k, 1, params) == conditional_pmf(k, 0, params));
}

TEST_CASE("conditional pmf normalizes over a truncated grid") {
  const auto params = small_params(2.0, 1.5);
  for (const int symbol : {0, 1}) {
    const auto means = hbt_means(symbol, params);
    std::array<std::int64_t, 3> hi{};
    for (int i = 0; i < 3; ++i) hi[i] = truncation_bound(means[i]);
    double sum = 0.0;
    CountTriple k;
    for (k.n00 = 0; k.n00 <= hi[0]; ++k.n00)
      for (k.n01 = 0; k.n01 <= hi[1]; ++k.n01)
        for (k.n10 = 0; k.n10 <= hi[2]; ++k.n10) sum += conditional_pmf(k, symbol, params);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("conditional pmf factorizes exactly") {
  const auto params = small_params(1.7, 0.9);
  const auto means = hbt_means(1, params);
  CountTriple k;
  for (k.n00 = 0; k.n00 <= 6; ++k.n00) {
    for (k.n01 = 0; k.n01 <= 6; ++k.n01) {
      for (k.n10 = 0; k.n10 <= 6; ++k.n10) {
        const double factored = poisson_pmf(k.n00, means[0]) * poisson_pmf(k.n01, means[1]) *
                                poisson_pmf(k.n10, means[2]);
        CHECK(std::abs(conditional_pmf(k, 1, params) - factored) <= 1e-15);
      }
    }
  }
}

TEST_CASE("conditional pmf matches Monte Carlo frequencies") {
  const auto params = small_params(1.5, 1.0);
  SimConfig config;
  config.stats = params.stats;
  config.channel_kind = ChannelKind::hbt;
  config.hbt_params = params;
  config.detector = DetectorKind::map;

  constexpr int kSamples = 20000;
  std::map<CountTriple, int> observed;
  CounterRng seq(97, 0);
  for (int i = 0; i < kSamples; ++i) {
    CounterRng rng(97, static_cast<std::uint64_t>(i) + 1);
    ++observed[sample_hbt_counts(1, config, rng)];
  }

  // Cells with expected count >= 8, remainder pooled; df forced even.
  std::vector<std::pair<double, double>> cells;  // (expected, observed)
  double pooled_exp = kSamples, pooled_obs = kSamples;
  CountTriple k;
  for (k.n00 = 0; k.n00 <= 8; ++k.n00) {
    for (k.n01 = 0; k.n01 <= 8; ++k.n01) {
      for (k.n10 = 0; k.n10 <= 8; ++k.n10) {
        const double expected = kSamples * conditional_pmf(k, 1, params);
        if (expected < 8.0) continue;
        const auto it = observed.find(k);
        const double obs = it == observed.end() ? 0.0 : it->second;
        cells.push_back({expected, obs});
        pooled_exp -= expected;
        pooled_obs -= obs;
      }
    }
  }
  REQUIRE(pooled_exp > 0.0);
  cells.push_back({pooled_exp, pooled_obs});
  if ((cells.size() - 1) % 2 != 0) {
    // Merge the two smallest cells to make the degrees of freedom even.
    std::swap(cells[0], cells[cells.size() - 2]);
    cells[cells.size() - 2].first += cells.back().first;
    cells[cells.size() - 2].second += cells.back().second;
    cells.pop_back();
  }
  double stat = 0.0;
  for (const auto& [expected, obs] : cells)
    stat += (obs - expected) * (obs - expected) / expected;
  const int df = static_cast<int>(cells.size()) - 1;
  CHECK(chi_square_p_value_even_df(df + (df % 2), stat) > 0.001);
}

TEST_CASE("mutual information vanishes without signal") {
  CHECK(hbt_mutual_information(small_params(0.0, 1.3), 0.5) == 0.0);
}

TEST_CASE("mutual information matches a brute-force oracle at small means") {
  const auto params = small_params(2.2, 1.1);
  for (const double prior : {0.3, 0.5, 0.64})
    CHECK(hbt_mutual_information(params, prior) ==
          doctest::Approx(brute_force_mi(params, prior)).epsilon(1e-9));
}

TEST_CASE("dimensional collapse to a single composite Poisson channel") {
  // Equal outcome triples and zero background: only the total count matters.
  HbtChannelParams params;
  params.coherent_probs = {0.3, 0.2, 0.1};
  params.thermal_probs = {0.3, 0.2, 0.1};
  params.stats = {2.3, 0.0, 1.0};

  const double total_mean = 0.6 * 2.3;
  for (const double prior : {0.3, 0.5, 0.62}) {
    // 1-D oracle: X -> T with T ~ Poisson(total_mean) under one, T = 0 under zero.
    double mi_1d = 0.0;
    const double mix0 = prior * std::exp(-total_mean) + (1.0 - prior);
    mi_1d += (1.0 - prior) * std::log2(1.0 / mix0);
    for (std::int64_t t = 0; t <= truncation_bound(total_mean); ++t) {
      const double q = poisson_pmf(t, total_mean);
      const double mix = t == 0 ? mix0 : prior * q;
      mi_1d += prior * q * std::log2(q / mix);
    }
    CHECK(hbt_mutual_information(params, prior) == doctest::Approx(mi_1d).epsilon(1e-8));
  }
}

TEST_CASE("mutual information is concave in the prior") {
  CounterRng rng(41, 0);
  for (int trial = 0; trial < 20; ++trial) {
    HbtChannelParams params;
    double sum_c = 0.0, sum_t = 0.0;
    for (int i = 0; i < 3; ++i) {
      params.coherent_probs[i] = 0.05 + 0.25 * rng.next_double();
      params.thermal_probs[i] = 0.05 + 0.25 * rng.next_double();
      sum_c += params.coherent_probs[i];
      sum_t += params.thermal_probs[i];
    }
    REQUIRE(sum_c <= 1.0);
    REQUIRE(sum_t <= 1.0);
    params.stats = {0.2 + 4.0 * rng.next_double(), 0.2 + 3.0 * rng.next_double(), 1.0};

    std::vector<double> mi(101);
    for (int i = 0; i <= 100; ++i)
      mi[i] = hbt_mutual_information(params, i / 100.0, {false, 10.0, 5.0});
    for (int i = 1; i < 100; ++i)
      CHECK(mi[i + 1] - 2.0 * mi[i] + mi[i - 1] <= 1e-8);
  }
}

TEST_CASE("truncation audit failure surfaces as an error") {
  const auto params = small_params(60.0, 25.0);
  HbtMiOptions tiny_box{true, 0.3, 5.0};
  CHECK_THROWS_AS(hbt_mutual_information(params, 0.5, tiny_box), hbt_truncation_error);
}

TEST_CASE("optimal prior") {
  SUBCASE("no signal reports the convention prior") {
    const auto design = optimal_prior(small_params(0.0, 1.0));
    CHECK(design.prior_star == 0.5);
    CHECK(design.rate_bits == 0.0);
  }
  SUBCASE("matches a dense grid search on a small instance") {
    const auto params = small_params(2.6, 0.8);
    const auto design = optimal_prior(params);
    double best_prior = 0.0, best = -1.0;
    for (int i = 0; i <= 1000; ++i) {
      const double prior = i / 1000.0;
      const double mi = hbt_mutual_information(params, prior, {false, 10.0, 5.0});
      if (mi > best) {
        best = mi;
        best_prior = prior;
      }
    }
    CHECK(std::abs(design.prior_star - best_prior) <= 1e-3 + 1e-4);
    CHECK(design.rate_bits == doctest::Approx(best).epsilon(1e-6));
    CHECK(design.rate_bits ==
          doctest::Approx(hbt_mutual_information(params, design.prior_star)).epsilon(1e-9));
  }
}

TEST_CASE("rate curve") {
  HbtChannelParams templ;
  templ.coherent_probs = {0.25, 0.25, 0.25};
  templ.thermal_probs = {0.36, 0.07, 0.07};

  std::vector<LinkBudget> budgets;
  for (double p = -172.0; p <= -166.0; p += 2.0) budgets.push_back({p, 3.8e9, 1e-3, 0.05, 1.0});

  SUBCASE("monotone nondecreasing in power") {
    const auto curve = hbt_rate_curve(budgets, templ);
    REQUIRE(curve.size() == budgets.size());
    for (std::size_t i = 1; i < curve.size(); ++i)
      CHECK(curve[i].rate_bits >= curve[i - 1].rate_bits - 1e-9);
  }
  SUBCASE("dead coherent path carries nothing") {
    HbtChannelParams dead = templ;
    dead.coherent_probs = {0.0, 0.0, 0.0};
    const auto curve = hbt_rate_curve(budgets, dead);
    for (const auto& pt : curve) CHECK(pt.rate_bits == 0.0);
  }
  CHECK_THROWS_AS(hbt_rate_curve({}, templ), std::invalid_argument);
}

TEST_CASE("information is positive exactly when the conditional laws differ") {
  CounterRng rng(59, 0);
  for (int trial = 0; trial < 10; ++trial) {
    HbtChannelParams params;
    for (int i = 0; i < 3; ++i) {
      params.coherent_probs[i] = 0.05 + 0.25 * rng.next_double();
      params.thermal_probs[i] = params.coherent_probs[i];
    }
    const double lambda = 0.3 + 3.0 * rng.next_double();
    params.stats = {lambda, lambda, 1.0};  // equal triples, equal rates: laws still differ
    CHECK(hbt_mutual_information(params, 0.5) > 0.0);

    params.stats = {0.0, lambda, 1.0};  // no signal: identical laws
    CHECK(hbt_mutual_information(params, 0.5) == 0.0);
  }
}

TEST_CASE("parameter validation") {
  HbtChannelParams params = small_params(1.0, 1.0);
  params.coherent_probs = {0.5, 0.4, 0.3};
  CHECK_THROWS_AS(validate_hbt_params(params), std::invalid_argument);

  params = small_params(1.0, 1.0);
  params.thermal_probs = {0.36, 0.07, 0.08};
  CHECK_NOTHROW(validate_hbt_params(params));
  CHECK_THROWS_AS(validate_hbt_params(params, true), std::invalid_argument);

  params = small_params(1.0, 1.0);
  params.coherent_probs[0] = -0.1;
  CHECK_THROWS_AS(validate_hbt_params(params), std::invalid_argument);
}
