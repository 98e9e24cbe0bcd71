#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "swarmetrics/curves.hpp"

using namespace swarmetrics;

namespace {

CurveBundle make_bundle(std::vector<double> perf, std::vector<double> intf, std::vector<double> pop,
                        CurveInfo info = {10, 4, "crw", "ideal"}, std::uint64_t seed = 7) {
  CurveBundle b;
  b.performance = PerformanceCurve(std::move(perf), info);
  b.interference = InterferenceCurve(std::move(intf), info);
  b.population = PopulationCurve(std::move(pop), info.interval_len);
  b.run_seed = seed;
  return b;
}

std::vector<double> v(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("aggregate_events sums per interval") {
  const std::vector<double> zeros{0, 0, 0, 0};
  CHECK(v(aggregate_events(zeros, 2).values()) == std::vector<double>{0.0, 0.0});
  const std::vector<double> ev{2, 0, 1, 3};
  CHECK(v(aggregate_events(ev, 2).values()) == std::vector<double>{1.0, 2.0});
  const std::vector<double> one{5};
  CHECK(v(aggregate_events(one, 1).values()) == std::vector<double>{5.0});
}

TEST_CASE("aggregate_events drops a partial tail and rejects empty input") {
  const std::vector<double> ev{1, 1, 1, 1, 1};
  CHECK(aggregate_events(ev, 2).size() == 2);
  CHECK_THROWS_WITH_AS(aggregate_events(std::span<const double>{}, 2), "empty event stream",
                       std::invalid_argument);
  CHECK_THROWS_AS(aggregate_events(ev, 0), std::invalid_argument);
}

TEST_CASE("aggregate_events conserves events") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(0, 4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t len = 1 + trial % 7;
    std::vector<double> ev(len * (1 + trial % 5));
    double total = 0;
    for (auto& e : ev) total += e = d(rng);
    auto c = aggregate_events(ev, len);
    CHECK(c.size() == ev.size() / len);
    double back = 0;
    for (double x : c.values()) back += x * static_cast<double>(len);
    CHECK(back == doctest::Approx(total));
  }
}

TEST_CASE("reciprocal_transform") {
  PerformanceCurve c({1, 2, 4}, {});
  CHECK(v(reciprocal_transform(c).values()) == std::vector<double>{1, 0.5, 0.25});
  PerformanceCurve ones({1, 1, 1}, {});
  CHECK(v(reciprocal_transform(ones).values()) == std::vector<double>{1, 1, 1});
  PerformanceCurve zero({0}, {});
  CHECK(reciprocal_transform(zero, 0.001)[0] == doctest::Approx(1000));
  CHECK_THROWS_AS(reciprocal_transform(zero, 0.0), std::invalid_argument);
}

TEST_CASE("curve invariants are enforced") {
  CHECK_THROWS_AS(PerformanceCurve({-1.0}, {}), std::invalid_argument);
  CHECK_THROWS_AS(PerformanceCurve({NAN}, {}), std::invalid_argument);
  CHECK_THROWS_AS(InterferenceCurve({1.5}, {}), std::invalid_argument);
  CHECK_THROWS_AS(PerformanceCurve({1.0}, {0, 1, "", ""}), std::invalid_argument);
  auto b = make_bundle({1, 2}, {0.1}, {4, 4});
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
}

TEST_CASE("mean_over_runs") {
  auto a = make_bundle({1, 2}, {0.1, 0.2}, {4, 4});
  const std::vector<CurveBundle> same{a, a, a};
  auto m = mean_over_runs(same);
  CHECK(m.mean.performance == a.performance);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(m.mean.interference[i] == doctest::Approx(a.interference[i]).epsilon(1e-15));
  for (double h : m.performance_halfwidth) CHECK(h == 0.0);

  const std::vector<CurveBundle> two{make_bundle({0}, {0}, {4}), make_bundle({2}, {0}, {4})};
  auto m2 = mean_over_runs(two);
  CHECK(m2.mean.performance[0] == doctest::Approx(1.0));
  // two-sample sd = sqrt(2), half-width = 1.96 sqrt(2)/sqrt(2)
  CHECK(m2.performance_halfwidth[0] == doctest::Approx(1.96));

  const std::vector<CurveBundle> single{a};
  CHECK_THROWS_AS(mean_over_runs(single), std::invalid_argument);
  const std::vector<CurveBundle> ragged{a, make_bundle({1}, {0}, {4})};
  CHECK_THROWS_AS(mean_over_runs(ragged), std::invalid_argument);
}

TEST_CASE("summarize") {
  const std::vector<double> s{1, 2, 3, 4};
  auto r = summarize(s);
  CHECK(r.mean == doctest::Approx(2.5));
  CHECK(r.halfwidth == doctest::Approx(1.96 * std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(r.n == 4);
}

TEST_CASE("csv round trip is bit exact") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 9;
    auto perf = oracle::random_curve(rng, n, 0.0, 1e3);
    auto intf = oracle::random_curve(rng, n, 0.0, 1.0);
    auto pop = oracle::random_curve(rng, n, 0.0, 64.0);
    perf[0] = 1e-300;
    auto b = make_bundle(perf, intf, pop, {1 + static_cast<std::size_t>(trial), 3, "dpo", "noise-sigma-0.02"},
                         rng());
    CHECK(parse_curves(format_curves(b)) == b);
  }
  auto dir = oracle::temp_dir("curves_rt");
  auto b = make_bundle({0.5, 0.25}, {0, 1}, {3, 2});
  write_curves(b, dir / "c.csv");
  CHECK(read_curves(dir / "c.csv") == b);
}

TEST_CASE("csv parse errors name the line") {
  const std::string header =
      "t,interval_len,swarm_size,controller,condition,perf,interference,tasked_size\n";
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_curves(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of(header + "0,10,4,crw,ideal,1,0,4\n1,10,4,crw,ideal,-1,0,4\n") == 3);
  CHECK(line_of(header + "0,10,4,crw,ideal,1,0\n") == 2);
  CHECK(line_of(header + "0,10,4,crw,ideal,abc,0,4\n") == 2);
  CHECK(line_of("t,perf\n") == 1);
  CHECK(line_of("#run_seed=5\nbad\n") == 2);
  CHECK(line_of(header + "0,10,4,crw,ideal,1,2,4\n") == 2);
  CHECK_THROWS_WITH_AS(parse_curves(header + "0,10,4,crw,ideal,-1,0,4\n"),
                       doctest::Contains("line 2"), ParseError);
}

TEST_CASE("labels with separators are rejected on write") {
  auto b = make_bundle({1}, {0}, {1}, {10, 1, "a,b", "ideal"});
  CHECK_THROWS_AS(format_curves(b), std::invalid_argument);
}
