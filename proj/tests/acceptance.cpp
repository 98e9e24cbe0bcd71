// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <thread>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "swarmetrics/curves.hpp"
#include "swarmetrics/dtw.hpp"
#include "swarmetrics/experiment.hpp"
#include "swarmetrics/flexibility.hpp"
#include "swarmetrics/io_util.hpp"
#include "swarmetrics/queue_montecarlo.hpp"
#include "swarmetrics/robustness.hpp"
#include "swarmetrics/scalability.hpp"
#include "swarmetrics/selforg.hpp"
#include "swarmetrics/sim/world.hpp"

using namespace swarmetrics;

namespace {

struct Check {
  bool ok = true;
  std::vector<std::string> notes;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("violated: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int failures = 0;

void criterion(int k, const std::string& title, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.notes.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!c.ok) ++failures;
  std::string detail;
  const std::size_t shown = std::min<std::size_t>(c.notes.size(), 8);
  for (std::size_t i = 0; i < shown; ++i) detail += (i ? "; " : "") + c.notes[i];
  if (c.notes.size() > shown) detail += "; ...";
  std::printf("%s criterion %d: %s [%.1fs] %s\n", c.ok ? "PASS" : "FAIL", k, title.c_str(), secs,
              detail.c_str());
  std::fflush(stdout);
}

sim::ControllerSpec crw() { return {}; }

sim::ControllerSpec dpo() {
  sim::ControllerSpec s;
  s.kind = sim::ControllerKind::Dpo;
  return s;
}

// ---- 1 ----------------------------------------------------------------------

void null_cases(Check& c) {
  constexpr double tol = 1e-9;
  std::mt19937_64 rng(11);
  double worst = 0.0;
  auto track = [&](double v, const std::string& what) {
    worst = std::max(worst, std::abs(v));
    c.require(std::abs(v) <= tol, what + " = " + fmt(v));
  };
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n1 = 1 + trial % 7, n2 = n1 * (2 + trial % 3);
    const double r = static_cast<double>(n2) / static_cast<double>(n1);
    auto lost = oracle::random_curve(rng, 20, 0.0, 5.0);
    std::vector<double> lost2;
    for (double v : lost) lost2.push_back(r * v);
    track(spatial_self_organization(lost, lost2, n1, n2), "spatial_selforg linear");

    auto p = oracle::random_curve(rng, 20, 0.1, 5.0);
    std::vector<double> p2;
    for (double v : p) p2.push_back(r * v);
    track(task_self_organization(p, p2, n1, n2), "task_selforg linear");

    const auto at_r = karp_flatt_terms(p, p2, n1, n2);
    for (double e : at_r) track(e - 1.0, "karp_flatt at psi=r minus 1");
    const auto at_one = karp_flatt_terms(p, p, n1, n2);
    for (double e : at_one) track(e, "karp_flatt at psi=1");

    VarianceProfile prof;
    prof.deviation = {WaveformKind::Square, 0.1 * (trial % 8), 4000.0, 0.0};
    for (auto conv : {ProportionalityConvention::SpeedCap, ProportionalityConvention::Literal}) {
      const auto ct = proportionality_curve(prof, p.size(), 1000, conv);
      const auto actual = ideal_reactivity_curve(p, ct);
      FlexibilityOptions fo;
      fo.convention = conv;
      track(reactivity(p, actual, prof, 1000, fo), "reactivity at c_t P_ideal");
    }
    track(adaptability(p, p), "adaptability identical");
    track(sa_robustness(p, p), "sa_robustness identical");
    const QueueRates rates{0.0, 0.001 * (trial % 3), 0.001, 0.003};
    track(pd_robustness(p, p, rates, rates, 20000), "pd_robustness ideal rates");
  }
  c.note("200 trials, max |value| = " + fmt(worst));
}

// ---- 2 ----------------------------------------------------------------------

void dtw_oracle(Check& c) {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<std::size_t> len(1, 6);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto x = oracle::random_curve(rng, len(rng));
    const auto y = oracle::random_curve(rng, len(rng));
    const bool squared = trial % 2 == 1;
    DtwConfig cfg;
    if (squared) cfg.cost = PointCost::SquaredDifference;
    if (dtw_distance(x, y, cfg) != oracle::dtw_enumerate(x, y, squared)) ++mismatches;
  }
  c.require(mismatches == 0, std::to_string(mismatches) + " of 500 oracle mismatches");
  c.note("500 oracle pairs, " + std::to_string(mismatches) + " mismatches");

  std::uniform_int_distribution<std::size_t> plen(1, 40);
  std::size_t bad_identity = 0, bad_symmetry = 0, bad_sign = 0, bad_bound = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = plen(rng);
    const auto x = oracle::random_curve(rng, n, -5.0, 5.0);
    const auto y = oracle::random_curve(rng, trial % 2 ? n : plen(rng), -5.0, 5.0);
    const double d = dtw_distance(x, y);
    if (dtw_distance(x, x) != 0.0) ++bad_identity;
    if (d != dtw_distance(y, x)) ++bad_symmetry;
    if (!(d >= 0.0)) ++bad_sign;
    if (x.size() == y.size()) {
      double l1 = 0.0;
      for (std::size_t i = 0; i < n; ++i) l1 += std::abs(x[i] - y[i]);
      if (d > l1 + 1e-12 * (1.0 + l1)) ++bad_bound;
    }
  }
  c.require(bad_identity == 0, "identity failures " + std::to_string(bad_identity));
  c.require(bad_symmetry == 0, "symmetry failures " + std::to_string(bad_symmetry));
  c.require(bad_sign == 0, "non-negativity failures " + std::to_string(bad_sign));
  c.require(bad_bound == 0, "L1 bound failures " + std::to_string(bad_bound));
  c.note("10000 property pairs");
}

// ---- 3 ----------------------------------------------------------------------

void queueing(Check& c) {
  const QueueRates rates{0.0, 0.001, 0.001, 0.003};
  const std::size_t n = 16;
  const std::uint64_t seed = 20261015;
  const double rho = utilization(rates);
  const double t_closed = time_not_tasked(rates);
  const double l_closed = queue_length(rho);
  const auto mc = simulate_untasked_queue(rates, n, 1000000, seed);

  const double t_err = std::abs(mc.mean_time_not_tasked - t_closed) / t_closed;
  const double l_err = std::abs(mc.mean_queue_length - l_closed) / l_closed;
  c.require(t_err <= 0.10, "T_S relative error " + fmt(t_err));
  c.require(l_err <= 0.10, "L relative error " + fmt(l_err));
  c.note("rho=" + fmt(rho) + " T_S " + fmt(mc.mean_time_not_tasked) + " vs " + fmt(t_closed) +
         " (" + fmt(100 * t_err) + "%)");
  c.note("L " + fmt(mc.mean_queue_length) + " vs " + fmt(l_closed) + " (" + fmt(100 * l_err) + "%)");

  const auto pi = oracle::queue_stationary(rates.departure_rate(), rates.service_rate(), n);
  double worst_exact = 0.0, worst_mc = 0.0;
  for (std::size_t m = 1; m <= n; ++m) {
    const double pv = availability(rho, n, m);
    worst_exact = std::max(worst_exact, std::abs(pv - oracle::queue_tail(pi, m)));
    worst_mc = std::max(worst_mc, std::abs(pv - mc.availability(m)));
  }
  c.require(worst_exact <= 1e-10, "p_v vs stationary solve " + fmt(worst_exact));
  c.require(worst_mc <= 0.03, "p_v vs Monte Carlo " + fmt(worst_mc));
  c.note("p_v(1)=" + fmt(availability(rho, n, 1)) + " max |p_v - solve| " + fmt(worst_exact) +
         " max |p_v - MC| " + fmt(worst_mc));
}

// ---- 4 ----------------------------------------------------------------------

void determinism(Check& c) {
  const auto dir = oracle::temp_dir("acceptance_determinism");
  {
    std::ofstream(dir / "cfg.json") << R"({"scenario": {"p_rw": 0.01, "noise": {"sigma": 0.02}},
                                          "controllers": ["dpo"]})";
  }
  std::string files[2];
  for (int i = 0; i < 2; ++i) {
    const auto out = dir / ("proc" + std::to_string(i) + ".csv");
    const auto r = oracle::run_cli("sim --config \"" + (dir / "cfg.json").string() +
                                       "\" --seed 77 --n 16 --out \"" + out.string() + "\"",
                                   dir);
    c.require(r.code == 0, "sim exit code " + std::to_string(r.code) + " " + r.err);
    files[i] = oracle::slurp(out);
  }
  c.require(!files[0].empty() && files[0] == files[1], "two processes differ");

  ExperimentPlan plan;
  plan.controllers = {crw(), dpo()};
  plan.swarm_sizes = {1, 4, 16};
  plan.sweeps = {{SweepAxis::NoiseSigma, {0.0, 0.05}}};
  plan.n_runs = 3;
  plan.scenario.p_rw = 0.01;
  const auto ex = expand(plan);
  const auto one = execute(ex.specs, 1);
  const auto eight = execute(ex.specs, 8);
  std::size_t differ = 0;
  for (std::size_t i = 0; i < ex.specs.size(); ++i) {
    if (!one[i].ok() || !eight[i].ok() ||
        format_curves(*one[i].bundle) != format_curves(*eight[i].bundle))
      ++differ;
  }
  c.require(differ == 0, std::to_string(differ) + " runs differ between 1 and 8 workers");
  const auto h1 = compute_suite(plan, ex, one).hash();
  const auto h8 = compute_suite(plan, ex, eight).hash();
  c.require(h1 == h8, "report hash differs");
  c.note("2 processes identical; " + std::to_string(ex.specs.size()) +
         " runs identical at 1 and 8 workers; report hash " + h1);
}

// ---- 5 ----------------------------------------------------------------------

void interference_density(Check& c) {
  ExperimentPlan plan;
  plan.controllers = {crw()};
  plan.swarm_sizes = {4, 16, 64};
  plan.n_runs = 20;
  plan.metrics = {Metric::Scalability};
  const auto ex = expand(plan);
  const auto out = execute(ex.specs, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<double> means;
  for (std::size_t n : plan.swarm_sizes) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < ex.specs.size(); ++i) {
      if (ex.specs[i].swarm_size != n) continue;
      c.require(out[i].ok(), "run failed: " + out[i].error);
      if (!out[i].ok()) continue;
      for (double v : out[i].bundle->interference.values()) {
        sum += v;
        ++count;
      }
    }
    means.push_back(count ? sum / static_cast<double>(count) : 0.0);
  }
  for (std::size_t i = 0; i + 1 < means.size(); ++i)
    c.require(means[i] <= means[i + 1], "interference decreases between sizes");
  c.note("mean interference N=4,16,64: " + fmt(means[0]) + ", " + fmt(means[1]) + ", " + fmt(means[2]));
}

// ---- 6, 7 -------------------------------------------------------------------

std::vector<double> sweep_values(const MetricReport& rep, const std::string& metric,
                                 const std::vector<double>& xs, Check& c) {
  std::vector<double> ys;
  for (double x : xs) {
    const MetricRow* found = nullptr;
    for (const auto& r : rep.rows)
      if (r.metric == metric && r.x && *r.x == x && r.n1 == 16) found = &r;
    c.require(found && found->value, metric + " missing at x=" + fmt(x));
    ys.push_back(found && found->value ? *found->value : NAN);
  }
  return ys;
}

std::string series(const std::vector<double>& xs, const std::vector<double>& ys,
                   const MetricReport& rep, const std::string& metric) {
  std::string s = metric + " ";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::string ci;
    for (const auto& r : rep.rows)
      if (r.metric == metric && r.x && *r.x == xs[i] && r.n1 == 16)
        ci = " (per-run " + fmt(r.runs.mean) + "+-" + fmt(r.runs.halfwidth) + ")";
    s += (i ? ", " : "") + fmt(xs[i]) + ":" + fmt(ys[i]) + ci;
  }
  return s;
}

void require_nondecreasing(Check& c, const std::vector<double>& ys, const std::string& what) {
  for (std::size_t i = 0; i + 1 < ys.size(); ++i)
    c.require(ys[i] <= ys[i + 1], what + " decreases between sweep values " + std::to_string(i) +
                                      " and " + std::to_string(i + 1));
}

void throttle_shape(Check& c) {
  ExperimentPlan plan;
  plan.controllers = {crw()};
  plan.swarm_sizes = {16};
  plan.n_runs = 20;
  const std::vector<double> amps{0.0, 0.2, 0.4};
  plan.sweeps = {{SweepAxis::ThrottleAmplitude, amps}};
  plan.metrics = {Metric::Reactivity, Metric::Adaptability};
  const auto ex = expand(plan);
  const auto rep = compute_suite(plan, ex, execute(ex.specs, std::max(1u, std::thread::hardware_concurrency())));
  c.require(rep.failures.empty(), "failed runs");
  const auto react = sweep_values(rep, "reactivity", amps, c);
  const auto adapt = sweep_values(rep, "adaptability", amps, c);
  require_nondecreasing(c, react, "reactivity");
  require_nondecreasing(c, adapt, "adaptability");
  c.note(series(amps, react, rep, "reactivity"));
  c.note(series(amps, adapt, rep, "adaptability"));
}

void noise_degradation(Check& c) {
  ExperimentPlan plan;
  plan.controllers = {dpo()};
  plan.swarm_sizes = {16};
  plan.n_runs = 20;
  const std::vector<double> sigmas{0.0, 0.02, 0.05};
  plan.sweeps = {{SweepAxis::NoiseSigma, sigmas}};
  plan.metrics = {Metric::SaRobustness};
  const auto ex = expand(plan);
  const auto rep = compute_suite(plan, ex, execute(ex.specs, std::max(1u, std::thread::hardware_concurrency())));
  c.require(rep.failures.empty(), "failed runs");
  const auto sa = sweep_values(rep, "sa_robustness", sigmas, c);
  require_nondecreasing(c, sa, "sa_robustness");
  c.note(series(sigmas, sa, rep, "sa_robustness"));
}

// ---- 8 ----------------------------------------------------------------------

void pure_death(Check& c) {
  std::size_t shrank = 0, monotone = 0;
  std::size_t final_sum = 0;
  const std::size_t n = 16, seeds = 20;
  for (std::uint64_t s = 0; s < seeds; ++s) {
    sim::WorldConfig cfg;
    cfg.n_robots = n;
    cfg.seed = run_seed(1, crw(), n, s);
    sim::Perturbations p;
    p.population = sim::PopulationProfile{};
    p.population->rates = {0.0005, 0.0, 0.0, 0.0};
    sim::World w(cfg, crw(), p);
    const std::size_t initial = w.tasked_count();
    std::size_t prev = initial;
    bool ok = true;
    for (std::size_t t = 0; t < cfg.duration; ++t) {
      const auto ev = w.step();
      if (ev.tasked > prev) ok = false;
      prev = ev.tasked;
    }
    if (ok) ++monotone;
    if (prev < initial) ++shrank;
    final_sum += prev;
  }
  c.require(monotone == seeds, "non-increasing in " + std::to_string(monotone) + "/20 runs");
  c.require(shrank == seeds, "final < initial in " + std::to_string(shrank) + "/20 runs");
  c.note("non-increasing " + std::to_string(monotone) + "/20, shrank " + std::to_string(shrank) +
         "/20, mean final size " + fmt(static_cast<double>(final_sum) / seeds) + " of " +
         std::to_string(n));
}

// ---- 9 ----------------------------------------------------------------------

void stream_isolation(Check& c) {
  std::size_t cases = 0;
  for (const auto& ctrl : {crw(), dpo()}) {
    for (std::uint64_t seed : {3u, 4u}) {
      sim::WorldConfig cfg;
      cfg.n_robots = 16;
      cfg.seed = seed;
      cfg.p_rw = 0.01;
      const auto base = format_curves(sim::run(cfg, ctrl));

      sim::Perturbations noise;
      noise.noise.sigma = 0.0;
      c.require(format_curves(sim::run(cfg, ctrl, noise)) == base, "sigma 0 changes the run");

      sim::Perturbations pop;
      pop.population = sim::PopulationProfile{};
      c.require(format_curves(sim::run(cfg, ctrl, pop)) == base, "zero population rates change the run");

      sim::Perturbations both = noise;
      both.population = pop.population;
      c.require(format_curves(sim::run(cfg, ctrl, both)) == base, "combined inert perturbations change the run");
      cases += 3;
    }
  }
  c.note(std::to_string(cases) + " inert variants byte-identical to the unperturbed runs");
}

}  // namespace

int main() {
  criterion(1, "metric null cases at 1e-9", null_cases);
  criterion(2, "DTW matches exhaustive enumeration; metric properties", dtw_oracle);
  criterion(3, "queue Monte Carlo agrees with closed forms", queueing);
  criterion(4, "simulator determinism across processes and worker counts", determinism);
  criterion(5, "CRW interference non-decreasing with N in a fixed arena", interference_density);
  criterion(6, "CRW reactivity and adaptability non-decreasing in throttle amplitude", throttle_shape);
  criterion(7, "DPO sa_robustness non-decreasing in noise sigma", noise_degradation);
  criterion(8, "pure death shrinks the tasked swarm monotonically", pure_death);
  criterion(9, "inert perturbations leave runs byte-identical", stream_isolation);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
