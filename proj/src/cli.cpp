#include "swarmetrics/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "swarmetrics/config_file.hpp"
#include "swarmetrics/curves.hpp"
#include "swarmetrics/experiment.hpp"
#include "swarmetrics/flexibility.hpp"
#include "swarmetrics/io_util.hpp"
#include "swarmetrics/robustness.hpp"
#include "swarmetrics/scalability.hpp"
#include "swarmetrics/selforg.hpp"
#include "swarmetrics/sim/world.hpp"

namespace swarmetrics {

namespace {

// Bad input from the user: exit 2.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

std::size_t default_workers(const OutputSettings& out) {
  if (out.workers) return *out.workers;
  if (const char* env = std::getenv("SWARMETRICS_WORKERS")) {
    auto n = parse_uint(env);
    if (!n || *n == 0) throw UsageError("SWARMETRICS_WORKERS must be a positive integer");
    return *n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

QueueRates parse_rates(const std::string& text, const std::string& flag) {
  auto cells = split(text, ',');
  if (cells.size() != 4)
    throw UsageError(flag + " expects lambda_d,lambda_bd,mu_b,mu_bd");
  double v[4];
  for (int i = 0; i < 4; ++i) {
    auto d = parse_double(cells[i]);
    if (!d) throw UsageError(flag + ": non-numeric rate '" + std::string(cells[i]) + "'");
    v[i] = *d;
  }
  QueueRates r{v[0], v[1], v[2], v[3]};
  r.validate();
  return r;
}

CurveBundle load_curves(const std::string& path) {
  if (!std::filesystem::exists(path)) throw UsageError("no such file: " + path);
  try {
    return read_curves(path);
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  out << text;
  if (!path.empty()) write_file_atomic(path, text);
}

// ---- sim ------------------------------------------------------------------

struct SimArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::string controller;
  std::string out;
  std::string trace;
};

int cmd_sim(const SimArgs& a, std::ostream& out) {
  ConfigFile cfg = a.config.empty() ? parse_config("{}") : load_config(a.config);
  const auto& plan = cfg.plan;

  sim::ControllerSpec ctrl = plan.controllers.front();
  if (!a.controller.empty()) {
    const auto kind = sim::parse_controller_kind(a.controller);
    auto it = std::find_if(plan.controllers.begin(), plan.controllers.end(),
                           [&](const auto& c) { return c.kind == kind; });
    ctrl = it != plan.controllers.end() ? *it : sim::ControllerSpec{kind, {}, {}};
  }

  sim::WorldConfig world = plan.scenario;
  world.n_robots = a.n.value_or(plan.swarm_sizes.front());
  world.seed = a.seed.value_or(plan.base_seed);
  sim::Perturbations pert = plan.perturbations;
  if (pert.population) {
    pert.population->max_population = world.n_robots;
    const auto init = pert.population->initial_tasked;
    pert.population->initial_tasked = init == 0 ? world.n_robots : std::min(init, world.n_robots);
  }

  std::string trace_path = a.trace;
  if (trace_path.empty() && cfg.output.trace) trace_path = (cfg.output.dir / "trace.csv").string();
  std::ostringstream trace;
  auto result = sim::simulate(world, ctrl, pert, trace_path.empty() ? nullptr : &trace);

  const std::filesystem::path path = a.out.empty() ? cfg.output.dir / "curves.csv" : std::filesystem::path(a.out);
  write_curves(result.bundle, path);
  if (!trace_path.empty()) write_file_atomic(trace_path, trace.str());
  out << path.string() << '\n';
  return kExitOk;
}

// ---- metrics --------------------------------------------------------------

struct MetricsArgs {
  std::string metric;
  std::vector<std::string> files;
  std::string single;
  std::string waveform = "square";
  std::optional<double> amplitude;
  double period = 5000.0;
  double phase = 0.0;
  std::string target = "carry_speed";
  double ideal_level = 1.0;
  std::string convention = "speed_cap";
  std::string zero_policy = "skip";
  bool literal_numerator = false;
  std::string rates;
  std::string ideal_rates;
  std::optional<double> total_time;
  std::optional<std::size_t> dtw_window;
  std::string dtw_cost = "absolute";
  std::string out;
};

int cmd_metrics(const MetricsArgs& a, std::ostream& out) {
  const Metric metric = parse_metric(a.metric);
  if (metric == Metric::Availability) throw UsageError("use the availability subcommand");
  if (a.files.size() != 2) throw UsageError("metrics expects exactly two curve files");

  const CurveBundle first = load_curves(a.files[0]);
  const CurveBundle second = load_curves(a.files[1]);
  require_compatible(first.performance, second.performance);

  DtwConfig dtw;
  if (a.dtw_cost == "squared") {
    dtw.cost = PointCost::SquaredDifference;
  } else if (a.dtw_cost != "absolute") {
    throw UsageError("--dtw-cost must be absolute or squared");
  }
  dtw.window = a.dtw_window;

  const auto p1 = first.performance.values();
  const auto p2 = second.performance.values();
  const std::size_t n1 = first.performance.info().swarm_size;
  const std::size_t n2 = second.performance.info().swarm_size;
  auto need_increasing = [&] {
    if (!(n1 < n2))
      throw UsageError("requires N1 < N2, got N1=" + std::to_string(n1) + " N2=" + std::to_string(n2));
  };

  double value = 0.0;
  switch (metric) {
    case Metric::SpatialSelfOrg: {
      need_increasing();
      if (a.single.empty()) throw UsageError("spatial_selforg needs --single with N=1 curves");
      const CurveBundle single = load_curves(a.single);
      if (single.performance.info().swarm_size != 1)
        throw UsageError("--single curves must have swarm_size 1");
      require_compatible(single.performance, first.performance);
      SingleRobotBaseline base{single.performance.values(), single.interference.values()};
      auto l1 = performance_lost(p1, first.interference.values(), n1, base);
      auto l2 = performance_lost(p2, second.interference.values(), n2, base);
      value = spatial_self_organization(l1, l2, n1, n2);
      break;
    }
    case Metric::TaskSelfOrg:
      need_increasing();
      value = task_self_organization(p1, p2, n1, n2);
      break;
    case Metric::Scalability: {
      need_increasing();
      ScalabilityOptions o;
      if (a.zero_policy == "clamp") {
        o.zero_policy = ZeroPolicy::Clamp;
      } else if (a.zero_policy != "skip") {
        throw UsageError("--zero-policy must be skip or clamp");
      }
      o.literal_numerator = a.literal_numerator;
      value = karp_flatt_scalability(p1, p2, n1, n2, o);
      break;
    }
    case Metric::Reactivity: {
      if (!a.amplitude) throw UsageError("reactivity needs --amplitude");
      VarianceProfile v;
      v.deviation.kind = parse_waveform_kind(a.waveform);
      v.deviation.amplitude = *a.amplitude;
      v.deviation.period = a.period;
      v.deviation.phase = a.phase;
      v.target = parse_deviation_target(a.target);
      v.ideal_level = a.ideal_level;
      v.validate();
      FlexibilityOptions fo;
      fo.dtw = dtw;
      if (a.convention == "literal") {
        fo.convention = ProportionalityConvention::Literal;
      } else if (a.convention != "speed_cap") {
        throw UsageError("--convention must be speed_cap or literal");
      }
      value = reactivity(p1, p2, v, first.performance.info().interval_len, fo);
      break;
    }
    case Metric::Adaptability:
      value = adaptability(p1, p2, dtw);
      break;
    case Metric::SaRobustness:
      value = sa_robustness(p1, p2, dtw);
      break;
    case Metric::PdRobustness: {
      if (a.rates.empty()) throw UsageError("pd_robustness needs --rates");
      const QueueRates rates = parse_rates(a.rates, "--rates");
      const QueueRates ideal = a.ideal_rates.empty() ? QueueRates{} : parse_rates(a.ideal_rates, "--ideal-rates");
      const double total = a.total_time.value_or(
          static_cast<double>(p1.size() * first.performance.info().interval_len));
      try {
        value = pd_robustness(p1, p2, rates, ideal, total);
      } catch (const UnstableQueueError& e) {
        throw UsageError(std::string("unstable: ") + e.what());
      }
      break;
    }
    case Metric::Availability:
      break;
  }
  emit("metric,value\n" + a.metric + "," + format_double(value) + "\n", a.out, out);
  return kExitOk;
}

// ---- availability ---------------------------------------------------------

struct AvailabilityArgs {
  std::optional<double> rho;
  std::string rates;
  std::size_t n = 0;
  std::optional<std::size_t> from;
  std::optional<std::size_t> to;
  std::string out;
};

int cmd_availability(const AvailabilityArgs& a, std::ostream& out) {
  if (a.rho.has_value() == !a.rates.empty()) throw UsageError("give exactly one of --rho or --rates");
  double rho = 0.0;
  if (a.rho) {
    rho = *a.rho;
  } else {
    const QueueRates r = parse_rates(a.rates, "--rates");
    if (!(r.service_rate() > 0.0)) throw UsageError("unstable: service rate mu_b + mu_bd is 0");
    rho = utilization(r);
  }
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw UsageError("rho must be a finite number >= 0");
  if (rho >= 1.0) throw UsageError("unstable: rho = " + format_double(rho) + " >= 1");
  if (a.n == 0) throw UsageError("--n must be >= 1");
  const std::size_t from = a.from.value_or(1);
  const std::size_t to = a.to.value_or(a.n);
  if (from < 1 || from > to || to > a.n) throw UsageError("need 1 <= n-min-from <= n-min-to <= N");

  std::ostringstream text;
  text << "n_min,p_v,tasked_availability\n";
  for (std::size_t m = from; m <= to; ++m) {
    // p_v needs rho > 0; in the rho -> 0 limit the queue is empty.
    const double pv = rho > 0.0 ? availability(rho, a.n, m) : 0.0;
    text << m << ',' << format_double(pv) << ',' << format_double(tasked_availability(rho, a.n, m))
         << '\n';
  }
  emit(text.str(), a.out, out);
  return kExitOk;
}

// ---- sweep ----------------------------------------------------------------

struct SweepArgs {
  std::string config;
  std::optional<std::size_t> workers;
  std::string out;
  bool quiet = false;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  ConfigFile cfg = load_config(a.config);
  if (!a.out.empty()) cfg.output.dir = a.out;
  std::size_t workers = a.workers ? *a.workers : default_workers(cfg.output);
  if (workers == 0) throw UsageError("--workers must be >= 1");

  const Expansion ex = expand(cfg.plan);
  for (const auto& w : ex.warnings) err << "warning: " << w << '\n';

  ProgressFn progress;
  if (!a.quiet) {
    progress = [&err](std::size_t done, std::size_t total) {
      err << "\rruns " << done << '/' << total << (done == total ? "\n" : "") << std::flush;
    };
  }
  const auto outcomes = execute(ex.specs, workers, progress);
  const MetricReport report = compute_suite(cfg.plan, ex, outcomes);
  write_report(cfg.output.dir, report, cfg.plan, ex, outcomes);

  const std::string effective = config_to_json(cfg);
  nlohmann::ordered_json manifest;
  manifest["plan_hash"] = hex64(fnv1a64(effective));
  manifest["report_hash"] = report.hash();
  manifest["config"] = nlohmann::ordered_json::parse(effective);
  manifest["conditions"] = nlohmann::ordered_json::array();
  for (const auto& c : ex.conditions) {
    manifest["conditions"].push_back({{"label", c.label},
                                      {"axis", c.axis ? to_string(*c.axis) : ""},
                                      {"baseline", c.is_baseline}});
  }
  manifest["runs"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < ex.specs.size(); ++i) {
    const auto& s = ex.specs[i];
    nlohmann::ordered_json r = {{"label", s.label()},
                                {"controller", s.controller_spec.id()},
                                {"condition", ex.conditions[s.condition].label},
                                {"swarm_size", s.swarm_size},
                                {"run", s.run},
                                {"seed", s.seed},
                                {"ok", outcomes[i].ok()}};
    if (!outcomes[i].ok()) r["error"] = outcomes[i].error;
    manifest["runs"].push_back(r);
  }
  manifest["warnings"] = ex.warnings;
  manifest["failures"] = report.failures;
  write_file_atomic(cfg.output.dir / "manifest.json", manifest.dump(2) + "\n");

  out << "report " << (cfg.output.dir / "metrics.csv").string() << '\n';
  out << "report_hash " << report.hash() << '\n';
  if (!report.failures.empty()) {
    err << report.failures.size() << " run(s) failed; see failures.txt\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Swarm performance metrics and foraging simulator", "swarmetrics"};
  app.require_subcommand(1);

  SimArgs sim_args;
  auto* sim = app.add_subcommand("sim", "Run one scenario cell and write its curves");
  sim->add_option("--config", sim_args.config, "Config file (JSON)");
  sim->add_option("--seed", sim_args.seed, "Run seed");
  sim->add_option("--n", sim_args.n, "Swarm size")->check(CLI::PositiveNumber);
  sim->add_option("--controller", sim_args.controller, "crw or dpo");
  sim->add_option("--out", sim_args.out, "Output curves CSV");
  sim->add_option("--trace", sim_args.trace, "Per-step trace CSV");

  MetricsArgs m;
  auto* metrics = app.add_subcommand("metrics", "Compute a metric from curve files");
  metrics->add_option("metric", m.metric,
                      "spatial_selforg|task_selforg|scalability|reactivity|adaptability|"
                      "sa_robustness|pd_robustness")
      ->required();
  metrics->add_option("files", m.files, "Two curve files: N1 N2, or ideal actual")->required();
  metrics->add_option("--single", m.single, "N=1 curves (spatial_selforg)");
  metrics->add_option("--waveform", m.waveform, "constant|square|sine");
  metrics->add_option("--amplitude", m.amplitude, "Throttle amplitude");
  metrics->add_option("--period", m.period, "Waveform period in timesteps");
  metrics->add_option("--phase", m.phase, "Waveform phase as a fraction of a period");
  metrics->add_option("--target", m.target, "carry_speed|all_speed");
  metrics->add_option("--ideal-level", m.ideal_level, "Ideal environmental level");
  metrics->add_option("--convention", m.convention, "speed_cap|literal");
  metrics->add_option("--zero-policy", m.zero_policy, "skip|clamp");
  metrics->add_flag("--literal-numerator", m.literal_numerator, "Use P2/P1 in the serial fraction");
  metrics->add_option("--rates", m.rates, "lambda_d,lambda_bd,mu_b,mu_bd");
  metrics->add_option("--ideal-rates", m.ideal_rates, "Rates of the ideal run (default all 0)");
  metrics->add_option("--total-time", m.total_time, "T in timesteps (default curve span)");
  metrics->add_option("--dtw-window", m.dtw_window, "Sakoe-Chiba half-width");
  metrics->add_option("--dtw-cost", m.dtw_cost, "absolute|squared");
  metrics->add_option("--out", m.out, "Also write the result CSV here");

  AvailabilityArgs av;
  auto* avail = app.add_subcommand("availability", "Swarm availability table over N_min");
  avail->add_option("--rho", av.rho, "Utilisation");
  avail->add_option("--rates", av.rates, "lambda_d,lambda_bd,mu_b,mu_bd");
  avail->add_option("--n", av.n, "Swarm size")->required();
  avail->add_option("--n-min-from", av.from, "First N_min (default 1)");
  avail->add_option("--n-min-to", av.to, "Last N_min (default N)");
  avail->add_option("--out", av.out, "Also write the table here");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Run an experiment plan and write the metric report");
  sweep->add_option("--config", sw.config, "Plan file (JSON)")->required();
  sweep->add_option("--workers", sw.workers, "Worker threads (default $SWARMETRICS_WORKERS or cores)");
  sweep->add_option("--out", sw.out, "Output directory");
  sweep->add_flag("--quiet", sw.quiet, "No progress counter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sim->parsed()) return cmd_sim(sim_args, out);
    if (metrics->parsed()) return cmd_metrics(m, out);
    if (avail->parsed()) return cmd_availability(av, out);
    if (sweep->parsed()) return cmd_sweep(sw, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace swarmetrics
