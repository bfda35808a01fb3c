#include <doctest.h>

#include <cmath>

#include "bessel_oracle.hpp"
#include "fttc/bessel.hpp"
#include "fttc/error.hpp"

using namespace fttc;

TEST_CASE("Bessel table matches the power series") {
  for (double x : {0.5, 1.0, 10.0, 300.0}) {
    const auto ref = fttc::testing::bessel_power_series(1001, x);
    const BesselTable t = bessel_j_sequence(1001, x);
    double worst = 0.0;
    for (std::size_t k = 0; k < 1001; ++k) worst = std::max(worst, std::abs(t.values[k] - ref[k]));
    INFO("x = " << x);
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("Bessel reference values") {
  const BesselTable t = bessel_j_sequence(4, 1.0);
  CHECK(std::abs(t.values[0] - 0.7651976865579666) <= 1e-14);
  CHECK(std::abs(t.values[1] - 0.4400505857449335) <= 1e-14);
  CHECK(std::abs(t.values[2] - 0.1149034849319005) <= 1e-14);
  CHECK(std::abs(bessel_j_sequence(1, 10.0).values[0] - (-0.2459357644513483)) <= 1e-14);
}

TEST_CASE("Bessel normalization and bounds") {
  for (double x : {0.1, 3.0, 47.5, 302.0, 1999.0}) {
    const auto n = static_cast<std::size_t>(x + 20.0 * std::cbrt(x)) + 40;
    const BesselTable t = bessel_j_sequence(n, x);
    double s = t.values[0];
    for (std::size_t k = 2; k < n; k += 2) s += 2.0 * t.values[k];
    CHECK(std::abs(s - 1.0) <= 1e-12);
    // Sum of squares: J_0^2 + 2 sum J_k^2 = 1.
    double q = t.values[0] * t.values[0];
    for (std::size_t k = 1; k < n; ++k) q += 2.0 * t.values[k] * t.values[k];
    CHECK(std::abs(q - 1.0) <= 1e-11);
    for (double v : t.values) CHECK(std::abs(v) <= 1.0);
  }
}

TEST_CASE("Bessel large arguments obey the three-term recurrence") {
  const double x = 2000.0;
  const BesselTable t = bessel_j_sequence(4000, x);
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < 4000; ++k) {
    const double r = t.values[k - 1] + t.values[k + 1] - 2.0 * k / x * t.values[k];
    worst = std::max(worst, std::abs(r));
  }
  CHECK(worst <= 1e-12);
  CHECK(std::abs(t.values[3999]) <= 1e-300);
}

TEST_CASE("Bessel edge cases") {
  const BesselTable z = bessel_j_sequence(5, 0.0);
  CHECK(z.values[0] == 1.0);
  for (std::size_t k = 1; k < 5; ++k) CHECK(z.values[k] == 0.0);
  CHECK(bessel_j_sequence(1, 2.0).values.size() == 1);
  CHECK_THROWS_AS(bessel_j_sequence(0, 1.0), Error);
  CHECK_THROWS_AS(bessel_j_sequence(3, -1.0), Error);
  CHECK_THROWS_AS(bessel_j_sequence(3, std::nan("")), Error);
  CHECK(bessel_start_order(10, 3.0) >= 60);
  CHECK(bessel_start_order(10, 3.0) % 2 == 0);
}
