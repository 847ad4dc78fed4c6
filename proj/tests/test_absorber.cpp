#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <numbers>
#include <vector>

#include "photonlink/absorber.hpp"
#include "photonlink/rng.hpp"

using namespace photonlink;

namespace {

AbsorberCoupling random_physical_coupling(CounterRng& rng) {
  // Re(gamma) in (0.05, 10], detuning part up to +-5.
  const double re = 0.05 + 9.95 * rng.next_double();
  const double im = 10.0 * (rng.next_double() - 0.5);
  return {{re, im}};
}

}  // namespace

TEST_CASE("single absorber absorption") {
  CHECK(single_absorption({{1.0, 0.0}}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(single_absorption({{1e-9, 0.0}}) < 1e-8);
  CHECK(single_absorption({{3.0, 0.0}}) == doctest::Approx(0.375).epsilon(1e-12));
  CHECK_THROWS_AS(single_absorption({{0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(single_absorption({{-0.5, 0.0}}), std::invalid_argument);
}

TEST_CASE("single absorption is symmetric under gamma -> 1/gamma") {
  for (const double g : {0.1, 0.37, 0.9, 2.4, 7.7}) {
    CHECK(single_absorption({{g, 0.0}}) ==
          doctest::Approx(single_absorption({{1.0 / g, 0.0}})).epsilon(1e-12));
  }
}

TEST_CASE("transfer matrix entries and determinant") {
  const auto m = transfer_matrix({{1.0, 0.0}});
  CHECK(std::abs(m.t11 - std::complex<double>{0.0, 0.0}) < 1e-15);
  CHECK(std::abs(m.t12 - std::complex<double>{-1.0, 0.0}) < 1e-15);
  CHECK(std::abs(m.t21 - std::complex<double>{1.0, 0.0}) < 1e-15);
  CHECK(std::abs(m.t22 - std::complex<double>{2.0, 0.0}) < 1e-15);

  CounterRng rng(17, 0);
  for (int i = 0; i < 50; ++i) {
    const auto c = random_physical_coupling(rng);
    CHECK(std::abs(transfer_matrix(c).det() - std::complex<double>{1.0, 0.0}) < 1e-12);
  }
  CHECK_THROWS_AS(transfer_matrix({{0.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("decoupled absorber is transparent") {
  const auto m = transfer_matrix({{1e9, 0.0}});
  CHECK(std::abs(m.t11 - 1.0) < 1e-8);
  CHECK(std::abs(m.t12) < 1e-8);
  CHECK(std::abs(m.t21) < 1e-8);
  CHECK(std::abs(m.t22 - 1.0) < 1e-8);

  std::vector<AbsorberCoupling> chain(5, AbsorberCoupling{{1e9, 0.0}});
  std::vector<double> phases(4, 0.9);
  CHECK(chain_response(chain, phases).absorption < 1e-6);
}

TEST_CASE("chain response of a single unit-coupling absorber") {
  const std::vector<AbsorberCoupling> one{{{1.0, 0.0}}};
  const auto r = chain_response(one, {});
  CHECK(r.absorption == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.reflectance == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(r.transmittance == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("empty chain is the identity") {
  const auto r = chain_response({}, {});
  CHECK(r.reflectance == 0.0);
  CHECK(r.transmittance == 1.0);
  CHECK(r.absorption == 0.0);
}

TEST_CASE("two unit absorbers beat one half for some phase") {
  const std::vector<AbsorberCoupling> two(2, AbsorberCoupling{{1.0, 0.0}});
  double best = 0.0;
  for (int i = 0; i < 720; ++i) {
    const double phase = std::numbers::pi * i / 720.0;
    best = std::max(best, chain_response(two, std::vector<double>{phase}).absorption);
  }
  CHECK(best >= 0.5);
  CHECK(best > 0.5 + 1e-3);
}

TEST_CASE("chain response conserves flux") {
  CounterRng rng(23, 0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<AbsorberCoupling> chain;
    std::vector<double> phases;
    const int n = 1 + static_cast<int>(rng.next_double() * 5);
    for (int i = 0; i < n; ++i) chain.push_back(random_physical_coupling(rng));
    for (int i = 0; i + 1 < n; ++i) phases.push_back(2.0 * std::numbers::pi * rng.next_double());
    const auto r = chain_response(chain, phases);
    CHECK(r.reflectance >= 0.0);
    CHECK(r.reflectance <= 1.0);
    CHECK(r.transmittance >= 0.0);
    CHECK(r.transmittance <= 1.0);
    CHECK(r.absorption >= 0.0);
    CHECK(r.absorption <= 1.0);
    CHECK(r.reflectance + r.transmittance + r.absorption == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("chain extraction agrees with the single-absorber formula") {
  CounterRng rng(31, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_physical_coupling(rng);
    const std::vector<AbsorberCoupling> one{c};
    CHECK(chain_response(one, {}).absorption ==
          doctest::Approx(single_absorption(c)).epsilon(1e-12));
  }
}

TEST_CASE("chain argument validation") {
  const std::vector<AbsorberCoupling> two(2, AbsorberCoupling{{1.0, 0.0}});
  CHECK_THROWS_AS(chain_response(two, {}), std::invalid_argument);
  CHECK_THROWS_AS(chain_response({}, std::vector<double>{0.1}), std::invalid_argument);
}

TEST_CASE("optimized single absorber hits the analytic maximum") {
  const auto design = optimize_chain(1);
  CHECK(design.absorption == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(design.gamma == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("optimized chains improve with length") {
  double prev = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const auto design = optimize_chain(n);
    CHECK(design.absorption >= prev - 1e-9);
    prev = design.absorption;
  }
  CHECK(optimize_chain(2).absorption > 0.5);
  CHECK_THROWS_AS(optimize_chain(0), std::invalid_argument);
  CHECK_THROWS_AS(optimize_chain(65), std::invalid_argument);
}

TEST_CASE("circuit-parameter coupling") {
  CircuitParams p;
  p.junction_cap = 2e-15;
  p.gate_cap = 1e-15;
  p.decay_rate = 5e7;
  p.carrier_freq = 2.0 * std::numbers::pi * 5e9;
  p.absorber_freq = p.carrier_freq;
  p.line_impedance = 50.0;

  SUBCASE("zero detuning gives a real coupling") {
    const auto c = gamma_from_circuit(p);
    CHECK(c.gamma.imag() == doctest::Approx(0.0));
    CHECK(c.gamma.real() > 0.0);
  }

  SUBCASE("coupling scales inversely with line impedance") {
    const auto base = gamma_from_circuit(p);
    CircuitParams doubled = p;
    doubled.line_impedance *= 2.0;
    CHECK(std::abs(gamma_from_circuit(doubled).gamma) ==
          doctest::Approx(0.5 * std::abs(base.gamma)).epsilon(1e-12));
  }

  SUBCASE("gate-capacitance factor") {
    CircuitParams equal = p;
    equal.gate_cap = equal.junction_cap;
    CircuitParams large = p;
    large.gate_cap = 1e6 * large.junction_cap;
    const double ratio =
        std::abs(gamma_from_circuit(equal).gamma) / std::abs(gamma_from_circuit(large).gamma);
    CHECK(ratio == doctest::Approx(2.0).epsilon(1e-5));
  }

  SUBCASE("rejects non-positive parameters") {
    CircuitParams bad = p;
    bad.junction_cap = 0.0;
    CHECK_THROWS_AS(gamma_from_circuit(bad), std::invalid_argument);
  }
}

TEST_CASE("counter efficiency") {
  CHECK(counter_efficiency(1.0, 0.0) == 1.0);
  CHECK(std::abs(counter_efficiency(0.75, 0.0667) - 0.700) < 5e-4);
  CHECK(counter_efficiency(0.7, 1.0) == 0.0);
  CHECK_THROWS_AS(counter_efficiency(1.2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(counter_efficiency(0.5, -0.1), std::invalid_argument);
}
