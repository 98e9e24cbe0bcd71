#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "swarmetrics/cli.hpp"
#include "swarmetrics/curves.hpp"
#include "swarmetrics/dtw.hpp"
#include "swarmetrics/flexibility.hpp"
#include "swarmetrics/robustness.hpp"
#include "swarmetrics/scalability.hpp"
#include "swarmetrics/selforg.hpp"
#include "swarmetrics/sim/world.hpp"

namespace py = pybind11;
using namespace swarmetrics;

namespace {

using Vec = std::vector<double>;

DtwConfig dtw_config(const std::string& cost, std::optional<std::size_t> window) {
  DtwConfig c;
  if (cost == "squared") {
    c.cost = PointCost::SquaredDifference;
  } else if (cost != "absolute") {
    throw std::invalid_argument("cost must be 'absolute' or 'squared'");
  }
  c.window = window;
  return c;
}

QueueRates rates_of(const std::vector<double>& r) {
  if (r.empty()) return {};
  if (r.size() != 4) throw std::invalid_argument("rates are (lambda_d, lambda_bd, mu_b, mu_bd)");
  QueueRates q{r[0], r[1], r[2], r[3]};
  q.validate();
  return q;
}

VarianceProfile profile_of(const std::string& waveform, double amplitude, double period,
                           double phase, const std::string& target, double ideal_level) {
  VarianceProfile p;
  p.deviation = {parse_waveform_kind(waveform), amplitude, period, phase};
  p.target = parse_deviation_target(target);
  p.ideal_level = ideal_level;
  p.validate();
  return p;
}

ProportionalityConvention convention_of(const std::string& name) {
  if (name == "speed_cap") return ProportionalityConvention::SpeedCap;
  if (name == "literal") return ProportionalityConvention::Literal;
  throw std::invalid_argument("convention must be 'speed_cap' or 'literal'");
}

py::dict bundle_dict(const CurveBundle& b) {
  py::dict d;
  d["performance"] = Vec(b.performance.values().begin(), b.performance.values().end());
  d["interference"] = Vec(b.interference.values().begin(), b.interference.values().end());
  d["population"] = Vec(b.population.values().begin(), b.population.values().end());
  d["interval_len"] = b.performance.info().interval_len;
  d["swarm_size"] = b.performance.info().swarm_size;
  d["controller"] = b.performance.info().controller;
  d["condition"] = b.performance.info().condition;
  d["run_seed"] = b.run_seed;
  d["csv"] = format_curves(b);
  return d;
}

}  // namespace

PYBIND11_MODULE(_swarmetrics, m) {
  m.doc() = "Swarm performance metrics and a deterministic foraging simulator";

  py::register_exception<UnstableQueueError>(m, "UnstableQueueError", PyExc_ValueError);

  m.def("dtw_distance",
        [](const Vec& x, const Vec& y, const std::string& cost, std::optional<std::size_t> window) {
          return dtw_distance(x, y, dtw_config(cost, window));
        },
        py::arg("x"), py::arg("y"), py::arg("cost") = "absolute", py::arg("window") = py::none());

  m.def("performance_lost",
        [](const Vec& perf, const Vec& interference, std::size_t n, std::optional<Vec> single_perf,
           std::optional<Vec> single_interference) {
          std::optional<SingleRobotBaseline> base;
          if (single_perf && single_interference) base = SingleRobotBaseline{*single_perf, *single_interference};
          return performance_lost(perf, interference, n, base);
        },
        py::arg("performance"), py::arg("interference"), py::arg("swarm_size"),
        py::arg("single_performance") = py::none(), py::arg("single_interference") = py::none());
  m.def("spatial_self_organization",
        [](const Vec& a, const Vec& b, std::size_t n1, std::size_t n2) {
          return spatial_self_organization(a, b, n1, n2);
        },
        py::arg("lost_n1"), py::arg("lost_n2"), py::arg("n1"), py::arg("n2"));
  m.def("task_self_organization",
        [](const Vec& a, const Vec& b, std::size_t n1, std::size_t n2) {
          return task_self_organization(a, b, n1, n2);
        },
        py::arg("perf_n1"), py::arg("perf_n2"), py::arg("n1"), py::arg("n2"));

  m.def("karp_flatt_scalability",
        [](const Vec& a, const Vec& b, std::size_t n1, std::size_t n2, const std::string& zero_policy,
           double clamp_epsilon, bool literal_numerator) {
          ScalabilityOptions o;
          if (zero_policy == "clamp") {
            o.zero_policy = ZeroPolicy::Clamp;
          } else if (zero_policy != "skip") {
            throw std::invalid_argument("zero_policy must be 'skip' or 'clamp'");
          }
          o.clamp_epsilon = clamp_epsilon;
          o.literal_numerator = literal_numerator;
          return karp_flatt_scalability(a, b, n1, n2, o);
        },
        py::arg("perf_n1"), py::arg("perf_n2"), py::arg("n1"), py::arg("n2"),
        py::arg("zero_policy") = "skip", py::arg("clamp_epsilon") = 1e-9,
        py::arg("literal_numerator") = false);
  m.def("serial_fraction", &serial_fraction, py::arg("speedup"), py::arg("ratio"));

  m.def("reactivity",
        [](const Vec& ideal, const Vec& actual, double amplitude, std::size_t interval_len,
           const std::string& waveform, double period, double phase, const std::string& target,
           double ideal_level, const std::string& convention) {
          FlexibilityOptions o;
          o.convention = convention_of(convention);
          return reactivity(ideal, actual,
                            profile_of(waveform, amplitude, period, phase, target, ideal_level),
                            interval_len, o);
        },
        py::arg("ideal"), py::arg("actual"), py::arg("amplitude"), py::arg("interval_len"),
        py::arg("waveform") = "square", py::arg("period") = 5000.0, py::arg("phase") = 0.0,
        py::arg("target") = "carry_speed", py::arg("ideal_level") = 1.0,
        py::arg("convention") = "speed_cap");
  m.def("adaptability",
        [](const Vec& ideal, const Vec& actual, const std::string& cost) {
          return adaptability(ideal, actual, dtw_config(cost, std::nullopt));
        },
        py::arg("ideal"), py::arg("actual"), py::arg("cost") = "absolute");
  m.def("sa_robustness",
        [](const Vec& ideal, const Vec& actual, const std::string& cost) {
          return sa_robustness(ideal, actual, dtw_config(cost, std::nullopt));
        },
        py::arg("ideal"), py::arg("actual"), py::arg("cost") = "absolute");
  m.def("pd_robustness",
        [](const Vec& ideal, const Vec& actual, const Vec& rates, const Vec& ideal_rates, double total_time) {
          return pd_robustness(ideal, actual, rates_of(rates), rates_of(ideal_rates), total_time);
        },
        py::arg("ideal"), py::arg("actual"), py::arg("rates"), py::arg("ideal_rates") = Vec{},
        py::arg("total_time"));

  m.def("utilization", [](const Vec& r) { return utilization(rates_of(r)); }, py::arg("rates"));
  m.def("queue_length", &queue_length, py::arg("rho"));
  m.def("time_not_tasked", [](const Vec& r) { return time_not_tasked(rates_of(r)); }, py::arg("rates"));
  m.def("availability", &availability, py::arg("rho"), py::arg("swarm_size"), py::arg("n_min"));
  m.def("tasked_availability", &tasked_availability, py::arg("rho"), py::arg("swarm_size"),
        py::arg("n_min"));

  m.def("simulate",
        [](std::size_t n_robots, std::uint64_t seed, const std::string& controller, std::size_t duration,
           std::size_t interval_len, double noise_sigma, double p_rw) {
          sim::WorldConfig cfg;
          cfg.n_robots = n_robots;
          cfg.seed = seed;
          cfg.duration = duration;
          cfg.interval_len = interval_len;
          cfg.p_rw = p_rw;
          sim::ControllerSpec spec;
          spec.kind = sim::parse_controller_kind(controller);
          sim::Perturbations p;
          p.noise.sigma = noise_sigma;
          py::gil_scoped_release release;
          auto bundle = sim::run(cfg, spec, p);
          py::gil_scoped_acquire acquire;
          return bundle_dict(bundle);
        },
        py::arg("n_robots") = 16, py::arg("seed") = 1, py::arg("controller") = "crw",
        py::arg("duration") = 20000, py::arg("interval_len") = 1000, py::arg("noise_sigma") = 0.0,
        py::arg("p_rw") = 0.0);

  m.def("parse_curves", [](const std::string& text) { return bundle_dict(parse_curves(text)); },
        py::arg("text"));

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::vector<const char*> argv{"swarmetrics"};
          for (const auto& a : args) argv.push_back(a.c_str());
          std::ostringstream out, err;
          const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
