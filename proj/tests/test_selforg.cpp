#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "swarmetrics/selforg.hpp"

using namespace swarmetrics;

TEST_CASE("performance_lost") {
  const std::vector<double> p{10}, none{0}, tenth{0.1};
  CHECK(performance_lost(p, none, 1, std::nullopt) == std::vector<double>{0.0});
  CHECK(performance_lost(p, tenth, 1, std::nullopt)[0] == doctest::Approx(1.0));

  // Baseline chosen so that P_lost(1) = 1 * 0.1 = 0.1.
  const std::vector<double> p1{1}, i1{0.1}, i4{0.2};
  SingleRobotBaseline base{p1, i1};
  CHECK(performance_lost(p, i4, 4, base)[0] == doctest::Approx(10 * 0.2 - 4 * 0.1));
}

TEST_CASE("performance_lost preconditions") {
  const std::vector<double> p{10, 3}, i{0.1, 0.1}, short_i{0.1};
  CHECK_THROWS_AS(performance_lost(p, i, 4, std::nullopt), std::invalid_argument);
  CHECK_THROWS_AS(performance_lost(p, short_i, 1, std::nullopt), std::invalid_argument);
  CHECK_THROWS_AS(performance_lost(p, i, 0, std::nullopt), std::invalid_argument);
  SingleRobotBaseline bad{short_i, short_i};
  CHECK_THROWS_AS(performance_lost(p, i, 4, bad), std::invalid_argument);
}

TEST_CASE("spatial self-organization examples") {
  const std::vector<double> l10{5}, l20a{8}, l20b{12};
  CHECK(spatial_self_organization(l10, l20a, 10, 20) == doctest::Approx(2.0));
  CHECK(spatial_self_organization(l10, l20b, 10, 20) == doctest::Approx(-2.0));
  CHECK_THROWS_AS(spatial_self_organization(l10, l20a, 20, 10), std::invalid_argument);
  CHECK_THROWS_AS(spatial_self_organization(l10, l20a, 10, 10), std::invalid_argument);
}

TEST_CASE("task self-organization examples") {
  const std::vector<double> p10{3}, p20a{7}, p20b{5};
  CHECK(task_self_organization(p10, p20a, 10, 20) == doctest::Approx(1.0));
  CHECK(task_self_organization(p10, p20b, 10, 20) == doctest::Approx(-1.0));
  const std::vector<double> two{3, 4};
  CHECK_THROWS_AS(task_self_organization(p10, two, 10, 20), std::invalid_argument);
}

TEST_CASE("linear scaling gives zero") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n1 = 1 + trial % 9, n2 = n1 + 1 + trial % 13;
    const double r = static_cast<double>(n2) / static_cast<double>(n1);
    auto a = oracle::random_curve(rng, 20, -5, 5);
    std::vector<double> b;
    for (double x : a) b.push_back(r * x);
    CHECK(std::abs(spatial_self_organization(a, b, n1, n2)) < 1e-9);
    auto pa = oracle::random_curve(rng, 20);
    std::vector<double> pb;
    for (double x : pa) pb.push_back(r * x);
    CHECK(std::abs(task_self_organization(pa, pb, n1, n2)) < 1e-9);
  }
}

TEST_CASE("self-organization is additive over time and sign follows the sums") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = oracle::random_curve(rng, 12);
    auto b = oracle::random_curve(rng, 12);
    std::vector<double> a1(a.begin(), a.begin() + 5), a2(a.begin() + 5, a.end());
    std::vector<double> b1(b.begin(), b.begin() + 5), b2(b.begin() + 5, b.end());
    CHECK(task_self_organization(a, b, 3, 7) ==
          doctest::Approx(task_self_organization(a1, b1, 3, 7) + task_self_organization(a2, b2, 3, 7)));
    CHECK(spatial_self_organization(a, b, 3, 7) ==
          doctest::Approx(spatial_self_organization(a1, b1, 3, 7) +
                          spatial_self_organization(a2, b2, 3, 7)));
    double sa = 0, sb = 0;
    for (double x : a) sa += x;
    for (double x : b) sb += x;
    CHECK((task_self_organization(a, b, 3, 7) > 0) == (sb > 7.0 / 3.0 * sa));
  }
}
