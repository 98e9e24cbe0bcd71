#include "swarmetrics/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "swarmetrics/io_util.hpp"
#include "swarmetrics/robustness.hpp"
#include "swarmetrics/selforg.hpp"
#include "swarmetrics/sim/rng.hpp"

namespace swarmetrics {

namespace {

constexpr const char* kAxisNames[] = {"noise_sigma", "throttle_amplitude", "population_rates", "p_rw"};
constexpr const char* kMetricNames[] = {"spatial_selforg", "task_selforg", "scalability",
                                        "reactivity",      "adaptability", "sa_robustness",
                                        "pd_robustness",   "availability"};

std::string condition_label(const sim::Perturbations& p, double p_rw) {
  std::string label = p.describe();
  if (p_rw > 0.0) label = (label == "ideal" ? "" : label + "+") + "p_rw-" + format_double(p_rw);
  return label;
}

std::string clean_note(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::vector<double> dedupe(const std::vector<double>& values) {
  std::vector<double> out;
  for (double v : values)
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

bool axis_needs_baseline(const ExperimentPlan& plan, SweepAxis axis) {
  switch (axis) {
    case SweepAxis::NoiseSigma: return plan.requests(Metric::SaRobustness);
    case SweepAxis::ThrottleAmplitude:
      return plan.requests(Metric::Reactivity) || plan.requests(Metric::Adaptability);
    case SweepAxis::PopulationRates: return plan.requests(Metric::PdRobustness);
    case SweepAxis::PRw: return plan.requests(Metric::Adaptability);
  }
  return false;
}

// Template condition with one axis moved to the given value.
void apply_axis(SweepAxis axis, double value, sim::Perturbations& p, double& p_rw) {
  switch (axis) {
    case SweepAxis::NoiseSigma:
      p.noise.sigma = value;
      break;
    case SweepAxis::ThrottleAmplitude: {
      VarianceProfile profile;
      if (p.throttle) {
        profile = *p.throttle;
      } else {
        profile.deviation.kind = WaveformKind::Square;
      }
      profile.deviation.amplitude = value;
      p.throttle = profile;
      break;
    }
    case SweepAxis::PopulationRates:
      if (!p.population) throw PlanError("population_rates sweep needs a population profile");
      p.population->rates.lambda_bd = value;
      break;
    case SweepAxis::PRw:
      p_rw = value;
      break;
  }
}

// Template condition with one axis at its ideal value.
void clear_axis(SweepAxis axis, sim::Perturbations& p, double& p_rw) {
  switch (axis) {
    case SweepAxis::NoiseSigma: p.noise.sigma = 0.0; break;
    case SweepAxis::ThrottleAmplitude: p.throttle.reset(); break;
    case SweepAxis::PopulationRates: p.population.reset(); break;
    case SweepAxis::PRw: p_rw = 0.0; break;
  }
}

}  // namespace

SweepAxis parse_sweep_axis(const std::string& name) {
  for (std::size_t i = 0; i < std::size(kAxisNames); ++i)
    if (name == kAxisNames[i]) return static_cast<SweepAxis>(i);
  throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

std::string to_string(SweepAxis axis) { return kAxisNames[static_cast<std::size_t>(axis)]; }

Metric parse_metric(const std::string& name) {
  for (std::size_t i = 0; i < std::size(kMetricNames); ++i)
    if (name == kMetricNames[i]) return static_cast<Metric>(i);
  throw std::invalid_argument("unknown metric '" + name + "'");
}

std::string to_string(Metric metric) { return kMetricNames[static_cast<std::size_t>(metric)]; }

std::vector<Metric> all_metrics() {
  std::vector<Metric> out;
  for (std::size_t i = 0; i < std::size(kMetricNames); ++i) out.push_back(static_cast<Metric>(i));
  return out;
}

bool ExperimentPlan::requests(Metric m) const {
  return metrics.empty() || std::find(metrics.begin(), metrics.end(), m) != metrics.end();
}

std::vector<std::string> ExperimentPlan::validate() const {
  std::vector<std::string> warnings;
  if (controllers.empty()) throw PlanError("plan needs at least one controller");
  for (const auto& c : controllers) c.validate();
  if (swarm_sizes.empty()) throw PlanError("plan needs at least one swarm size");
  for (std::size_t i = 0; i < swarm_sizes.size(); ++i) {
    if (swarm_sizes[i] == 0) throw PlanError("swarm sizes must be >= 1");
    if (i > 0 && swarm_sizes[i] <= swarm_sizes[i - 1])
      throw PlanError("swarm sizes must be strictly increasing");
  }
  if (n_runs < 2) throw PlanError("n_runs must be >= 2");

  const bool has_unit = swarm_sizes.front() == 1;
  for (Metric m : {Metric::SpatialSelfOrg, Metric::TaskSelfOrg}) {
    if (!metrics.empty() && requests(m) && !has_unit)
      throw PlanError(to_string(m) + " requires swarm size 1 in swarm_sizes");
  }

  std::set<SweepAxis> seen;
  for (const auto& s : sweeps) {
    const std::string name = to_string(s.axis);
    if (!seen.insert(s.axis).second) throw PlanError("sweep axis " + name + " listed twice");
    if (s.values.empty()) throw PlanError("sweep axis " + name + " has no values");
    for (double v : s.values) {
      if (!std::isfinite(v) || v < 0.0) throw PlanError("sweep " + name + " values must be >= 0");
      if (s.axis == SweepAxis::ThrottleAmplitude && v >= 1.0)
        throw PlanError("throttle_amplitude values must lie in [0,1)");
      if (s.axis == SweepAxis::PRw && v > 1.0) throw PlanError("p_rw values must lie in [0,1]");
    }
    if (s.axis == SweepAxis::PopulationRates && !perturbations.population)
      throw PlanError("population_rates sweep needs scenario.population");
    if (dedupe(s.values).size() != s.values.size())
      warnings.push_back("duplicate values in sweep " + name + " were dropped");
  }

  perturbations.noise.validate();
  if (perturbations.throttle) perturbations.throttle->validate();
  if (perturbations.population) perturbations.population->rates.validate();
  for (std::size_t n : swarm_sizes) {
    auto cfg = scenario;
    cfg.n_robots = n;
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw PlanError("scenario with N=" + std::to_string(n) + ": " + e.what());
    }
  }
  return warnings;
}

std::string RunSpec::label() const {
  return controller_spec.id() + "/N" + std::to_string(swarm_size) + "/" +
         perturbations.describe() + (config.p_rw > 0 ? "+p_rw-" + format_double(config.p_rw) : "") +
         "/run" + std::to_string(run);
}

std::string controller_key(const sim::ControllerSpec& spec) {
  std::string key = spec.id();
  if (spec.kind == sim::ControllerKind::Crw) {
    key += ":turn_stddev=" + format_double(spec.crw.turn_stddev);
  } else {
    key += ":decay_rho=" + format_double(spec.dpo.decay_rho) +
           ":sense_radius=" + format_double(spec.dpo.sense_radius) +
           ":relevance_floor=" + format_double(spec.dpo.relevance_floor) +
           ":turn_stddev=" + format_double(spec.dpo.exploration.turn_stddev);
  }
  return key;
}

std::uint64_t run_seed(std::uint64_t base_seed, const sim::ControllerSpec& controller,
                       std::size_t swarm_size, std::size_t run) {
  return sim::derive_seed(base_seed, fnv1a64(controller_key(controller)), swarm_size, run);
}

Expansion expand(const ExperimentPlan& plan) {
  Expansion ex;
  ex.warnings = plan.validate();

  auto add_condition = [&](Condition c) -> std::size_t {
    if (c.is_baseline) {
      for (std::size_t i = 0; i < ex.conditions.size(); ++i)
        if (ex.conditions[i].is_baseline && ex.conditions[i].label == c.label) return i;
    }
    ex.conditions.push_back(std::move(c));
    return ex.conditions.size() - 1;
  };

  if (plan.sweeps.empty()) {
    Condition c;
    c.p_rw = plan.scenario.p_rw;
    c.perturbations = plan.perturbations;
    c.label = condition_label(c.perturbations, c.p_rw);
    add_condition(std::move(c));
  }
  for (const auto& sweep : plan.sweeps) {
    std::optional<std::size_t> baseline;
    if (axis_needs_baseline(plan, sweep.axis)) {
      Condition b;
      b.is_baseline = true;
      b.p_rw = plan.scenario.p_rw;
      b.perturbations = plan.perturbations;
      clear_axis(sweep.axis, b.perturbations, b.p_rw);
      b.label = condition_label(b.perturbations, b.p_rw);
      baseline = add_condition(std::move(b));
    }
    for (double v : dedupe(sweep.values)) {
      Condition c;
      c.axis = sweep.axis;
      c.value = v;
      c.baseline = baseline;
      c.p_rw = plan.scenario.p_rw;
      c.perturbations = plan.perturbations;
      apply_axis(sweep.axis, v, c.perturbations, c.p_rw);
      c.label = to_string(sweep.axis) + "=" + format_double(v);
      add_condition(std::move(c));
    }
  }

  for (std::size_t ci = 0; ci < plan.controllers.size(); ++ci) {
    for (std::size_t n : plan.swarm_sizes) {
      for (std::size_t k = 0; k < ex.conditions.size(); ++k) {
        const auto& cond = ex.conditions[k];
        for (std::size_t r = 0; r < plan.n_runs; ++r) {
          RunSpec s;
          s.controller = ci;
          s.condition = k;
          s.swarm_size = n;
          s.run = r;
          s.seed = run_seed(plan.base_seed, plan.controllers[ci], n, r);
          s.config = plan.scenario;
          s.config.n_robots = n;
          s.config.seed = s.seed;
          s.config.p_rw = cond.p_rw;
          s.controller_spec = plan.controllers[ci];
          s.perturbations = cond.perturbations;
          if (s.perturbations.population) {
            auto& pop = *s.perturbations.population;
            pop.max_population = n;
            pop.initial_tasked = std::min(plan.perturbations.population->initial_tasked == 0
                                              ? n
                                              : plan.perturbations.population->initial_tasked,
                                          n);
          }
          ex.specs.push_back(std::move(s));
        }
      }
    }
  }
  return ex;
}

std::vector<RunOutcome> execute(std::span<const RunSpec> specs, std::size_t workers,
                                const ProgressFn& progress) {
  std::vector<RunOutcome> out(specs.size());
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex progress_mutex;

  auto worker = [&]() {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      const auto& s = specs[i];
      try {
        out[i].bundle = sim::run(s.config, s.controller_spec, s.perturbations);
      } catch (const std::exception& e) {
        out[i].error = e.what();
      } catch (...) {
        out[i].error = "unknown error";
      }
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(++done, specs.size());
      }
    }
  };

  const std::size_t n = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(specs.size(), 1));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

std::string MetricRow::key() const {
  return metric + "|" + controller + "|" + condition + "|" + std::to_string(n1) + "|" +
         std::to_string(n2) + "|" + (x ? format_double(*x) : "");
}

void MetricReport::sort() {
  auto order = [](const MetricRow& r) {
    return std::make_tuple(r.metric, r.controller, r.condition, r.n1, r.n2, r.x.value_or(-1.0));
  };
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const MetricRow& a, const MetricRow& b) { return order(a) < order(b); });
  std::sort(failures.begin(), failures.end());
  failures.erase(std::unique(failures.begin(), failures.end()), failures.end());
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::string size_cell(std::size_t n) { return n ? std::to_string(n) : ""; }

}  // namespace

std::string MetricReport::csv() const {
  std::ostringstream out;
  out << "metric,controller,condition,axis,x,n1,n2,value,run_mean,run_ci_low,run_ci_high,n_runs,"
         "status,note\n";
  for (const auto& r : rows) {
    const bool have_runs = r.runs.n > 0;
    out << r.metric << ',' << r.controller << ',' << r.condition << ',' << r.axis << ',' << opt(r.x)
        << ',' << size_cell(r.n1) << ',' << size_cell(r.n2) << ',' << opt(r.value) << ','
        << (have_runs ? format_double(r.runs.mean) : "") << ','
        << (have_runs ? format_double(r.runs.mean - r.runs.halfwidth) : "") << ','
        << (have_runs ? format_double(r.runs.mean + r.runs.halfwidth) : "") << ',' << r.runs.n
        << ',' << (r.applicable ? "ok" : "inapplicable") << ',' << clean_note(r.note) << '\n';
  }
  return out.str();
}

std::string MetricReport::hash() const { return hex64(fnv1a64(csv())); }

std::vector<std::string> MetricReport::metric_names() const {
  std::vector<std::string> names;
  for (const auto& r : rows)
    if (std::find(names.begin(), names.end(), r.metric) == names.end()) names.push_back(r.metric);
  return names;
}

std::string MetricReport::plot_csv(const std::string& metric) const {
  std::vector<const MetricRow*> sel;
  for (const auto& r : rows)
    if (r.metric == metric && r.applicable && r.value) sel.push_back(&r);
  std::stable_sort(sel.begin(), sel.end(), [](const MetricRow* a, const MetricRow* b) {
    return std::make_tuple(a->controller, a->axis, a->n1, a->n2, a->x.value_or(-1.0)) <
           std::make_tuple(b->controller, b->axis, b->n1, b->n2, b->x.value_or(-1.0));
  });
  std::ostringstream out;
  out << "controller,condition,axis,x,n1,n2,y,ci_low,ci_high,n_runs\n";
  for (const auto* r : sel) {
    const bool have_runs = r->runs.n > 0;
    out << r->controller << ',' << r->condition << ',' << r->axis << ',' << opt(r->x) << ','
        << size_cell(r->n1) << ',' << size_cell(r->n2) << ',' << format_double(*r->value) << ','
        << (have_runs ? format_double(r->runs.mean - r->runs.halfwidth) : "") << ','
        << (have_runs ? format_double(r->runs.mean + r->runs.halfwidth) : "") << ',' << r->runs.n
        << '\n';
  }
  return out.str();
}

namespace {

// Runs of one (controller, condition, size) cell, indexed by run.
struct Cell {
  std::vector<const CurveBundle*> runs;
  std::optional<CurveBundle> mean;
  std::size_t failed = 0;
};

class Suite {
 public:
  Suite(const ExperimentPlan& plan, const Expansion& ex, std::span<const RunOutcome> outcomes)
      : plan_(plan), ex_(ex) {
    if (outcomes.size() != ex.specs.size())
      throw std::invalid_argument("outcome count does not match the expansion");
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& s = ex.specs[i];
      auto& cell = cells_[{s.controller, s.condition, s.swarm_size}];
      if (cell.runs.size() <= s.run) cell.runs.resize(s.run + 1, nullptr);
      if (outcomes[i].ok()) {
        cell.runs[s.run] = &*outcomes[i].bundle;
      } else {
        ++cell.failed;
        report_.failures.push_back(s.label() + ": " + outcomes[i].error);
      }
    }
    for (auto& [key, cell] : cells_) {
      std::vector<CurveBundle> ok;
      for (const auto* b : cell.runs)
        if (b) ok.push_back(*b);
      if (ok.size() >= 2) cell.mean = mean_over_runs(ok).mean;
    }
  }

  MetricReport compute() {
    for (std::size_t ci = 0; ci < plan_.controllers.size(); ++ci) {
      for (std::size_t k = 0; k < ex_.conditions.size(); ++k) {
        size_pair_metrics(ci, k);
        if (ex_.conditions[k].axis) perturbed_metrics(ci, k);
      }
    }
    availability_table();
    placeholders();
    report_.sort();
    return std::move(report_);
  }

 private:
  using Key = std::tuple<std::size_t, std::size_t, std::size_t>;

  const Cell* cell(std::size_t ci, std::size_t k, std::size_t n) const {
    auto it = cells_.find({ci, k, n});
    return it == cells_.end() ? nullptr : &it->second;
  }

  MetricRow base_row(Metric m, std::size_t ci, std::size_t k) const {
    MetricRow r;
    r.metric = to_string(m);
    r.controller = ci < plan_.controllers.size() ? plan_.controllers[ci].id() : "-";
    const auto& cond = ex_.conditions[k];
    r.condition = cond.label;
    if (cond.axis) {
      r.axis = to_string(*cond.axis);
      r.x = cond.value;
    }
    return r;
  }

  void inapplicable(MetricRow r, const std::string& why) {
    r.applicable = false;
    r.value.reset();
    r.note = why;
    report_.rows.push_back(std::move(r));
  }

  // Metric on the averaged curves plus its per-run distribution over runs
  // available in every involved cell.
  template <typename Fn>
  void evaluate(MetricRow row, std::vector<const Cell*> cells, Fn fn) {
    for (const auto* c : cells) {
      if (!c || !c->mean) {
        inapplicable(std::move(row), "fewer than 2 successful runs in a required cell");
        return;
      }
    }
    try {
      std::vector<const CurveBundle*> means;
      for (const auto* c : cells) means.push_back(&*c->mean);
      row.value = fn(means);
      std::vector<double> per_run;
      for (std::size_t r = 0; r < plan_.n_runs; ++r) {
        std::vector<const CurveBundle*> runs;
        for (const auto* c : cells)
          runs.push_back(r < c->runs.size() ? c->runs[r] : nullptr);
        if (std::find(runs.begin(), runs.end(), nullptr) != runs.end()) continue;
        per_run.push_back(fn(runs));
      }
      row.runs = summarize(per_run);
      std::size_t failed = 0;
      for (const auto* c : cells) failed += c->failed;
      if (failed) row.note = std::to_string(failed) + " failed runs excluded";
      report_.rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      inapplicable(std::move(row), e.what());
    }
  }

  void size_pair_metrics(std::size_t ci, std::size_t k) {
    std::vector<std::size_t> sizes;
    for (std::size_t n : plan_.swarm_sizes)
      if (n > 1) sizes.push_back(n);
    const bool has_unit = plan_.swarm_sizes.front() == 1;

    for (Metric m : {Metric::SpatialSelfOrg, Metric::TaskSelfOrg, Metric::Scalability}) {
      if (!plan_.requests(m)) continue;
      if (sizes.size() < 2) {
        inapplicable(base_row(m, ci, k), "needs two swarm sizes above 1");
        continue;
      }
      for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        const std::size_t n1 = sizes[i];
        const std::size_t n2 = sizes[i + 1];
        auto row = base_row(m, ci, k);
        row.n1 = n1;
        row.n2 = n2;
        const Cell* c1 = cell(ci, k, n1);
        const Cell* c2 = cell(ci, k, n2);
        if (m == Metric::Scalability) {
          const auto opts = plan_.options.scalability;
          evaluate(std::move(row), {c1, c2}, [&](const std::vector<const CurveBundle*>& b) {
            return karp_flatt_scalability(b[0]->performance.values(), b[1]->performance.values(),
                                          n1, n2, opts);
          });
        } else if (m == Metric::TaskSelfOrg) {
          evaluate(std::move(row), {c1, c2}, [&](const std::vector<const CurveBundle*>& b) {
            return task_self_organization(b[0]->performance.values(), b[1]->performance.values(),
                                          n1, n2);
          });
        } else {
          if (!has_unit) {
            inapplicable(std::move(row), "needs swarm size 1 in swarm_sizes");
            continue;
          }
          evaluate(std::move(row), {cell(ci, k, 1), c1, c2},
                   [&](const std::vector<const CurveBundle*>& b) {
                     SingleRobotBaseline base{b[0]->performance.values(),
                                              b[0]->interference.values()};
                     auto lost1 = performance_lost(b[1]->performance.values(),
                                                   b[1]->interference.values(), n1, base);
                     auto lost2 = performance_lost(b[2]->performance.values(),
                                                   b[2]->interference.values(), n2, base);
                     return spatial_self_organization(lost1, lost2, n1, n2);
                   });
        }
      }
    }
  }

  void perturbed_metrics(std::size_t ci, std::size_t k) {
    const auto& cond = ex_.conditions[k];
    std::vector<Metric> metrics;
    switch (*cond.axis) {
      case SweepAxis::ThrottleAmplitude: metrics = {Metric::Reactivity, Metric::Adaptability}; break;
      case SweepAxis::NoiseSigma: metrics = {Metric::SaRobustness}; break;
      case SweepAxis::PopulationRates: metrics = {Metric::PdRobustness}; break;
      case SweepAxis::PRw: metrics = {Metric::Adaptability}; break;
    }
    const auto& opts = plan_.options;
    for (Metric m : metrics) {
      if (!plan_.requests(m)) continue;
      for (std::size_t n : plan_.swarm_sizes) {
        auto row = base_row(m, ci, k);
        row.n1 = n;
        if (!cond.baseline) {
          inapplicable(std::move(row), "missing ideal baseline");
          continue;
        }
        const Cell* ideal = cell(ci, *cond.baseline, n);
        const Cell* actual = cell(ci, k, n);
        auto fn = [&](const std::vector<const CurveBundle*>& b) -> double {
          const auto pi = b[0]->performance.values();
          const auto pa = b[1]->performance.values();
          switch (m) {
            case Metric::Reactivity: {
              FlexibilityOptions fo{opts.dtw, opts.convention};
              return reactivity(pi, pa, *cond.perturbations.throttle, plan_.scenario.interval_len, fo);
            }
            case Metric::Adaptability: return adaptability(pi, pa, opts.dtw);
            case Metric::SaRobustness: return sa_robustness(pi, pa, opts.dtw);
            case Metric::PdRobustness: {
              const auto& base = ex_.conditions[*cond.baseline].perturbations.population;
              const QueueRates ideal_rates = base ? base->rates : QueueRates{};
              return pd_robustness(pi, pa, cond.perturbations.population->rates, ideal_rates,
                                   static_cast<double>(plan_.scenario.duration));
            }
            default: return 0.0;
          }
        };
        evaluate(std::move(row), {ideal, actual}, fn);
      }
    }
  }

  void availability_table() {
    if (!plan_.requests(Metric::Availability)) return;
    for (std::size_t k = 0; k < ex_.conditions.size(); ++k) {
      const auto& cond = ex_.conditions[k];
      if (!cond.perturbations.population || !cond.perturbations.population->active()) continue;
      const auto& rates = cond.perturbations.population->rates;
      for (std::size_t n : plan_.swarm_sizes) {
        std::vector<std::size_t> n_mins = plan_.options.n_min;
        if (n_mins.empty())
          for (std::size_t m = 1; m <= n; ++m) n_mins.push_back(m);
        for (std::size_t n_min : n_mins) {
          if (n_min < 1 || n_min > n) continue;
          auto row = base_row(Metric::Availability, plan_.controllers.size(), k);
          row.n1 = n;
          row.axis = "n_min";
          row.x = static_cast<double>(n_min);
          try {
            const double rho = utilization(rates);
            if (!(rho < 1.0)) {
              inapplicable(std::move(row), "unstable: rho = " + format_double(rho) + " >= 1");
              continue;
            }
            row.value = availability(rho, n, n_min);
            row.note = "rho=" + format_double(rho) +
                       " tasked_availability=" + format_double(tasked_availability(rho, n, n_min));
            report_.rows.push_back(std::move(row));
          } catch (const std::exception& e) {
            inapplicable(std::move(row), e.what());
          }
        }
      }
    }
  }

  // Requested metrics that produced no row at all.
  void placeholders() {
    for (Metric m : all_metrics()) {
      if (!plan_.requests(m)) continue;
      const std::string name = to_string(m);
      const bool per_controller = m != Metric::Availability;
      const std::size_t count = per_controller ? plan_.controllers.size() : 1;
      for (std::size_t ci = 0; ci < count; ++ci) {
        const std::string ctrl = per_controller ? plan_.controllers[ci].id() : "-";
        const bool present = std::any_of(report_.rows.begin(), report_.rows.end(), [&](const MetricRow& r) {
          return r.metric == name && r.controller == ctrl;
        });
        if (present) continue;
        MetricRow row;
        row.metric = name;
        row.controller = ctrl;
        row.condition = "*";
        std::string why;
        switch (m) {
          case Metric::Reactivity: why = "requires a throttle_amplitude sweep"; break;
          case Metric::Adaptability: why = "requires a throttle_amplitude or p_rw sweep"; break;
          case Metric::SaRobustness: why = "requires a noise_sigma sweep"; break;
          case Metric::PdRobustness: why = "requires a population_rates sweep"; break;
          case Metric::Availability: why = "requires population rates"; break;
          default: why = "no applicable cell"; break;
        }
        inapplicable(std::move(row), why);
      }
    }
  }

  const ExperimentPlan& plan_;
  const Expansion& ex_;
  std::map<Key, Cell> cells_;
  MetricReport report_;
};

}  // namespace

MetricReport compute_suite(const ExperimentPlan& plan, const Expansion& expansion,
                           std::span<const RunOutcome> outcomes) {
  return Suite(plan, expansion, outcomes).compute();
}

MetricReport merge_reports(const MetricReport& a, const MetricReport& b) {
  MetricReport out;
  std::map<std::string, MetricRow> by_key;
  std::map<std::string, std::string> line_of;
  for (const auto* rep : {&a, &b}) {
    for (const auto& r : rep->rows) {
      MetricReport one;
      one.rows = {r};
      const std::string line = one.csv();
      auto [it, inserted] = line_of.emplace(r.key(), line);
      if (!inserted && it->second != line)
        throw std::invalid_argument("conflicting values for " + r.key());
      if (inserted) by_key.emplace(r.key(), r);
    }
    out.failures.insert(out.failures.end(), rep->failures.begin(), rep->failures.end());
  }
  for (auto& [key, row] : by_key) {
    if (row.condition == "*") {
      const bool covered = std::any_of(by_key.begin(), by_key.end(), [&](const auto& kv) {
        return kv.second.metric == row.metric && kv.second.controller == row.controller &&
               kv.second.condition != "*";
      });
      if (covered) continue;
    }
    out.rows.push_back(row);
  }
  out.sort();
  return out;
}

void write_report(const std::filesystem::path& dir, const MetricReport& report,
                  const ExperimentPlan& plan, const Expansion& expansion,
                  std::span<const RunOutcome> outcomes) {
  write_file_atomic(dir / "metrics.csv", report.csv());
  for (const auto& name : report.metric_names())
    write_file_atomic(dir / ("metric_" + name + ".csv"), report.plot_csv(name));

  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<CurveBundle>> cells;
  for (std::size_t i = 0; i < outcomes.size() && i < expansion.specs.size(); ++i) {
    const auto& s = expansion.specs[i];
    if (outcomes[i].ok()) cells[{s.controller, s.condition, s.swarm_size}].push_back(*outcomes[i].bundle);
  }
  for (const auto& [key, runs] : cells) {
    if (runs.size() < 2) continue;
    const auto& [ci, k, n] = key;
    std::string name = plan.controllers[ci].id() + "_" + expansion.conditions[k].label + "_N" +
                       std::to_string(n) + ".csv";
    for (auto& ch : name)
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '_' || ch == '-'))
        ch = '-';
    write_curves(mean_over_runs(runs).mean, dir / "curves" / name);
  }
  if (!report.failures.empty()) {
    std::string text;
    for (const auto& f : report.failures) text += f + "\n";
    write_file_atomic(dir / "failures.txt", text);
  }
}

}  // namespace swarmetrics
