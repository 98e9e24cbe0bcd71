#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "swarmetrics/flexibility.hpp"

using namespace swarmetrics;

namespace {

VarianceProfile square(double amplitude, double period = 5000.0) {
  VarianceProfile p;
  p.deviation.kind = WaveformKind::Square;
  p.deviation.amplitude = amplitude;
  p.deviation.period = period;
  return p;
}

}  // namespace

TEST_CASE("proportionality") {
  CHECK(proportionality(0.0, 1.0) == 1.0);
  CHECK(proportionality(0.4, 1.0) == doctest::Approx(1.4));
  CHECK(proportionality(-0.25, 0.5) == doctest::Approx(0.5));
  CHECK_THROWS_WITH_AS(proportionality(0.3, 0.0), doctest::Contains("undefined proportionality at t"),
                       std::domain_error);
}

TEST_CASE("ideal reactivity curve") {
  const std::vector<double> ones{1, 1}, twos{2, 2}, fours{4, 4}, alt{1, 0.5};
  CHECK(ideal_reactivity_curve(ones, twos) == std::vector<double>{2, 2});
  CHECK(ideal_reactivity_curve(fours, alt) == std::vector<double>{4, 2});
  const std::vector<double> p{3, 5, 7};
  auto flat = proportionality_curve(square(0.0), 3, 100);
  CHECK(ideal_reactivity_curve(p, flat) == p);
}

TEST_CASE("waveforms") {
  Waveform sq{WaveformKind::Square, 0.4, 5000.0, 0.0};
  CHECK(sq.value_at(0) == 0.0);
  CHECK(sq.value_at(1000) == doctest::Approx(0.4));
  CHECK(sq.value_at(2500) == 0.0);
  CHECK(sq.value_at(3000) == 0.0);
  CHECK(sq.value_at(6000) == doctest::Approx(0.4));
  Waveform sine{WaveformKind::Sine, 0.4, 5000.0, 0.0};
  CHECK(sine.value_at(0) == doctest::Approx(0.0));
  CHECK(sine.value_at(2500) == doctest::Approx(0.4));
  CHECK(sine.value_at(1250) == doctest::Approx(0.2));
  Waveform shifted{WaveformKind::Sine, 0.4, 5000.0, 0.5};
  CHECK(shifted.value_at(0) == doctest::Approx(0.4));
  Waveform c{WaveformKind::Constant, 0.3, 5000.0, 0.0};
  CHECK(c.value_at(123) == 0.3);
}

TEST_CASE("waveform interval mean") {
  Waveform sq{WaveformKind::Square, 0.4, 10.0, 0.0};
  // timesteps 0..9: high at 1..4
  CHECK(sq.mean_over(0, 10) == doctest::Approx(0.4 * 4 / 10));
  Waveform sine{WaveformKind::Sine, 0.6, 40.0, 0.1};
  double sum = 0;
  for (int t = 5; t < 25; ++t) sum += sine.value_at(t);
  CHECK(sine.mean_over(5, 20) == doctest::Approx(sum / 20));
}

TEST_CASE("waveform validation") {
  CHECK_THROWS_AS((Waveform{WaveformKind::Square, 1.0, 10.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Waveform{WaveformKind::Square, -0.1, 10.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Waveform{WaveformKind::Sine, 0.5, 1.0, 0.0}.validate()), std::invalid_argument);
  VarianceProfile p = square(0.2);
  p.ideal_level = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("proportionality conventions") {
  VarianceProfile p;
  p.deviation = {WaveformKind::Constant, 0.25, 5000.0, 0.0};
  auto cap = proportionality_curve(p, 2, 10, ProportionalityConvention::SpeedCap);
  auto lit = proportionality_curve(p, 2, 10, ProportionalityConvention::Literal);
  CHECK(cap[0] == doctest::Approx(1.0 / 1.25));
  CHECK(lit[1] == doctest::Approx(1.25));
}

TEST_CASE("reactivity and adaptability examples") {
  const std::vector<double> ideal{2, 2, 2}, actual{2, 2, 1};
  CHECK(reactivity(ideal, actual, square(0.0), 1000) == doctest::Approx(1.0));
  const std::vector<double> a{1, 1}, b{1, 3};
  CHECK(adaptability(a, b) == doctest::Approx(2.0));
  CHECK(adaptability(a, a) == 0.0);

  const std::vector<double> p{0, 1, 2, 3, 3}, shifted{0, 0, 1, 2, 3};
  double l1 = 0;
  for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(p[i] - shifted[i]);
  CHECK(adaptability(p, shifted) == oracle::dtw_enumerate(p, shifted));
  CHECK(adaptability(p, shifted) < l1);
}

TEST_CASE("reactivity is zero when the swarm tracks the ideal-reactivity curve") {
  std::mt19937_64 rng(8);
  for (auto conv : {ProportionalityConvention::SpeedCap, ProportionalityConvention::Literal}) {
    for (int trial = 0; trial < 50; ++trial) {
      auto ideal = oracle::random_curve(rng, 20, 0.0, 3.0);
      auto prof = square(0.1 * (trial % 9), 3000.0);
      auto c = proportionality_curve(prof, ideal.size(), 500, conv);
      auto actual = ideal_reactivity_curve(ideal, c);
      FlexibilityOptions o;
      o.convention = conv;
      CHECK(reactivity(ideal, actual, prof, 500, o) == 0.0);
    }
  }
}

TEST_CASE("zero deviation reduces reactivity to adaptability; both scale linearly") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    auto ideal = oracle::random_curve(rng, 15);
    auto actual = oracle::random_curve(rng, 15);
    CHECK(reactivity(ideal, actual, square(0.0), 1000) == doctest::Approx(adaptability(ideal, actual)));
    auto i2 = ideal, a2 = actual;
    for (auto& v : i2) v *= 2;
    for (auto& v : a2) v *= 2;
    auto prof = square(0.3, 4000.0);
    CHECK(reactivity(i2, a2, prof, 1000) == doctest::Approx(2 * reactivity(ideal, actual, prof, 1000)));
    CHECK(adaptability(i2, a2) == doctest::Approx(2 * adaptability(ideal, actual)));
    CHECK(reactivity(ideal, actual, prof, 1000) >= 0.0);
  }
}

TEST_CASE("mismatched curves are rejected") {
  const std::vector<double> a{1, 2}, b{1};
  CHECK_THROWS_AS(adaptability(a, b), std::invalid_argument);
  CHECK_THROWS_AS(reactivity(a, b, square(0.2), 10), std::invalid_argument);
}
