#include <doctest.h>

#include <cmath>

#include "photonlink/numeric.hpp"

using namespace photonlink;

TEST_CASE("poisson tails match direct summation at small means") {
  const double mean = 3.7;
  for (std::int64_t m = 0; m <= 25; ++m) {
    double direct = 0.0;
    for (std::int64_t k = 0; k <= m; ++k) direct += poisson_pmf(k, mean);
    CHECK(poisson_lower_tail(m, mean) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(poisson_upper_tail(m, mean) ==
          doctest::Approx(1.0 - (m > 0 ? poisson_lower_tail(m - 1, mean) : 0.0)).epsilon(1e-12));
  }
}

TEST_CASE("poisson tails stay consistent at large means") {
  const double mean = 1337.5;
  for (const std::int64_t m : {1200LL, 1337LL, 1338LL, 1500LL}) {
    const double lower = poisson_lower_tail(m, mean);
    const double upper = poisson_upper_tail(m + 1, mean);
    CHECK(lower + upper == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lower >= 0.0);
    CHECK(upper >= 0.0);
  }
  CHECK(poisson_upper_tail(0, mean) == 1.0);
  CHECK(poisson_lower_tail(-1, mean) == 0.0);
}

TEST_CASE("poisson tail boundary conventions") {
  CHECK(poisson_upper_tail(0, 5.0) == 1.0);
  CHECK(poisson_upper_tail(3, 0.0) == 0.0);
  CHECK(poisson_lower_tail(0, 5.0) == doctest::Approx(std::exp(-5.0)).epsilon(1e-13));
}

TEST_CASE("binary entropy endpoints and symmetry") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(binary_entropy(0.3) == doctest::Approx(binary_entropy(0.7)).epsilon(1e-14));
}

TEST_CASE("golden section finds a quadratic maximum") {
  const auto opt = golden_section_maximize(
      [](double x) { return -(x - 0.372) * (x - 0.372); }, 0.0, 1.0, 1e-10);
  CHECK(opt.x == doctest::Approx(0.372).epsilon(1e-8));
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const auto nodes = gauss_legendre(16);
  double integral = 0.0;
  for (const auto& n : nodes) integral += n.w * (3.0 * n.x * n.x);  // int_-1^1 3x^2 = 2
  CHECK(integral == doctest::Approx(2.0).epsilon(1e-13));
  double total_weight = 0.0;
  for (const auto& n : nodes) total_weight += n.w;
  CHECK(total_weight == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("parallel map is deterministic and ordered") {
  const auto f = [](std::int64_t i) { return std::sin(static_cast<double>(i)); };
  const auto a = parallel_map_ordered(1000, f, 1);
  const auto b = parallel_map_ordered(1000, f, 4);
  CHECK(a == b);
}

TEST_CASE("worker count honors the environment cap") {
  setenv("PHOTONLINK_THREADS", "2", 1);
  CHECK(worker_count(8) == 2);
  CHECK(worker_count(1) == 1);
  unsetenv("PHOTONLINK_THREADS");
  CHECK(worker_count(8) == 8);
}
