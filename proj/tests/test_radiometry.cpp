#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "photonlink/radiometry.hpp"

using namespace photonlink;

TEST_CASE("dbm conversions") {
  CHECK(dbm_to_watts(0.0) == doctest::Approx(1.0e-3).epsilon(1e-14));
  CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(dbm_to_watts(-152.0) - 6.3096e-19) < 1e-22);
}

TEST_CASE("dbm round trip") {
  for (const double dbm : {-170.0, -152.0, -60.0, 0.0, 17.5, 30.0}) {
    const double back = watts_to_dbm(dbm_to_watts(dbm));
    CHECK(back == doctest::Approx(dbm).epsilon(1e-12));
  }
  CHECK_THROWS_AS(watts_to_dbm(0.0), std::invalid_argument);
}

TEST_CASE("slot statistics at the room-temperature reference point") {
  const auto stats = slot_statistics({-152.0, 5e9, 1e-3, 300.0, 0.9});
  CHECK(stats.lambda_sig == doctest::Approx(190.4).epsilon(1e-3));
  CHECK(stats.lambda_bg == doctest::Approx(1250.2).epsilon(1e-3));
  CHECK(stats.capture_prob == 0.9);
}

TEST_CASE("slot statistics at the cryogenic reference point") {
  const auto stats = slot_statistics({-156.0, 3.8e9, 1e-3, 0.05, 1.0});
  CHECK(stats.lambda_sig == doctest::Approx(99.8).epsilon(1e-3));
  CHECK(stats.lambda_bg == doctest::Approx(0.274).epsilon(1e-3));
}

TEST_CASE("zero antenna temperature gives zero background") {
  const auto stats = slot_statistics({-150.0, 5e9, 1e-3, 0.0, 1.0});
  CHECK(stats.lambda_bg == 0.0);
}

TEST_CASE("signal mean is monotone in the link knobs") {
  const LinkBudget base{-150.0, 5e9, 1e-3, 300.0, 1.0};
  double prev = 0.0;
  for (double p = -160.0; p <= -140.0; p += 2.0) {
    LinkBudget b = base;
    b.power_dbm = p;
    const double sig = slot_statistics(b).lambda_sig;
    CHECK(sig > prev);
    prev = sig;
  }
  prev = 0.0;
  for (double tau = 1e-4; tau <= 1e-2; tau *= 2.0) {
    LinkBudget b = base;
    b.slot_duration = tau;
    const double sig = slot_statistics(b).lambda_sig;
    CHECK(sig > prev);
    prev = sig;
  }
  prev = 1e300;
  for (double f = 1e9; f <= 64e9; f *= 2.0) {
    LinkBudget b = base;
    b.carrier_freq = f;
    const double sig = slot_statistics(b).lambda_sig;
    CHECK(sig < prev);
    prev = sig;
  }
}

TEST_CASE("background mean is linear in antenna temperature") {
  for (const double t : {0.05, 4.0, 77.0, 300.0}) {
    const auto one = slot_statistics({-150.0, 5e9, 1e-3, t, 1.0});
    const auto two = slot_statistics({-150.0, 5e9, 1e-3, 2.0 * t, 1.0});
    CHECK(two.lambda_bg == doctest::Approx(2.0 * one.lambda_bg).epsilon(1e-12));
  }
}

TEST_CASE("budget invariants are enforced") {
  CHECK_THROWS_AS(slot_statistics({-150.0, 0.0, 1e-3, 300.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(slot_statistics({-150.0, 5e9, 0.0, 300.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(slot_statistics({-150.0, 5e9, 1e-3, -1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(slot_statistics({-150.0, 5e9, 1e-3, 300.0, 1.5}), std::invalid_argument);
}
