#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "swarmetrics/scalability.hpp"

using namespace swarmetrics;

TEST_CASE("karp-flatt examples") {
  const std::vector<double> p1{2}, p2a{4}, p2b{2}, p2c{1};
  CHECK(karp_flatt_scalability(p1, p2a, 10, 20) == doctest::Approx(1.0));
  CHECK(karp_flatt_scalability(p1, p2b, 10, 20) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(karp_flatt_scalability(p1, p2c, 10, 20) == doctest::Approx(-2.0));
  CHECK(serial_fraction(2.0, 2.0) == doctest::Approx(0.0));
  CHECK(serial_fraction(1.0, 2.0) == doctest::Approx(1.0));
  CHECK(serial_fraction(0.5, 2.0) == doctest::Approx(3.0));
}

TEST_CASE("karp-flatt preconditions") {
  const std::vector<double> a{1, 2}, b{1};
  CHECK_THROWS_AS(karp_flatt_scalability(a, b, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(karp_flatt_scalability(a, a, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(karp_flatt_scalability(a, a, 4, 2), std::invalid_argument);
}

TEST_CASE("identical curves give zero") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = oracle::random_curve(rng, 10, 0.1, 5);
    CHECK(std::abs(karp_flatt_scalability(p, p, 3, 9)) < 1e-9);
  }
}

TEST_CASE("zero policy") {
  const std::vector<double> p1{0, 2, 2}, p2{4, 0, 4};
  ScalabilityOptions skip;
  CHECK(karp_flatt_terms(p1, p2, 10, 20, skip).size() == 1);
  CHECK(karp_flatt_scalability(p1, p2, 10, 20, skip) == doctest::Approx(1.0));
  ScalabilityOptions clamp;
  clamp.zero_policy = ZeroPolicy::Clamp;
  clamp.clamp_epsilon = 1e-3;
  auto terms = karp_flatt_terms(p1, p2, 10, 20, clamp);
  REQUIRE(terms.size() == 3);
  // psi = 4/1e-3 and 1e-3/2, r = 2
  CHECK(terms[0] == doctest::Approx(1.0 - (1.0 / 4000.0 - 0.5) / 0.5));
  CHECK(terms[1] == doctest::Approx(1.0 - (2000.0 - 0.5) / 0.5));
}

TEST_CASE("literal numerator variant") {
  const std::vector<double> p1{2}, p2{4};
  ScalabilityOptions lit;
  lit.literal_numerator = true;
  // e = (psi - 1/r)/(1 - 1/r) with psi = 2, r = 2
  CHECK(karp_flatt_scalability(p1, p2, 10, 20, lit) == doctest::Approx(1.0 - (2.0 - 0.5) / 0.5));
}

TEST_CASE("serial fraction decreases with speedup and tends to 1/psi") {
  for (double r : {1.5, 2.0, 8.0}) {
    double prev = serial_fraction(0.1, r);
    for (double psi = 0.2; psi < 10; psi += 0.1) {
      const double e = serial_fraction(psi, r);
      CHECK(e < prev);
      prev = e;
    }
  }
  CHECK(serial_fraction(3.0, 1e9) == doctest::Approx(1.0 / 3.0));
}
