#include "swarmetrics/config_file.hpp"

#include <cmath>
#include <initializer_list>
#include <set>

#include <json.hpp>

#include "swarmetrics/io_util.hpp"

namespace swarmetrics {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// Object view that tracks its key path and rejects unknown keys.
class Section {
 public:
  Section(const json& j, std::string path, std::initializer_list<const char*> keys)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + "expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, value] : j_.items()) {
      if (!allowed.count(key)) throw ConfigError("unknown key '" + child(key) + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  const json& at(const char* key) const { return j_.at(key); }
  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void get(const char* key, double& out) const {
    if (!has(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(child(key) + ": expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ConfigError(child(key) + ": expected a finite number");
  }
  void get(const char* key, std::size_t& out) const {
    if (!has(key)) return;
    out = to_count(j_.at(key), child(key));
  }
  void get_u64(const char* key, std::uint64_t& out) const {
    if (!has(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_number_unsigned()) throw ConfigError(child(key) + ": expected a non-negative integer");
    out = v.get<std::uint64_t>();
  }
  void get(const char* key, bool& out) const {
    if (!has(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(child(key) + ": expected true or false");
    out = v.get<bool>();
  }
  void get(const char* key, std::string& out) const {
    if (!has(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(child(key) + ": expected a string");
    out = v.get<std::string>();
  }
  void get(const char* key, sim::Vec2& out) const {
    if (!has(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw ConfigError(child(key) + ": expected an array of 2 numbers");
    out = {v[0].get<double>(), v[1].get<double>()};
  }
  std::vector<double> numbers(const char* key) const {
    const auto& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(child(key) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(child(key) + ": expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  std::vector<std::size_t> counts(const char* key) const {
    const auto& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(child(key) + ": expected an array of integers");
    std::vector<std::size_t> out;
    for (const auto& e : v) out.push_back(to_count(e, child(key)));
    return out;
  }

  // Parses an enum-like string with a project parse function.
  template <typename Fn, typename T>
  void get_enum(const char* key, T& out, Fn parse) const {
    std::string name;
    get(key, name);
    if (name.empty()) return;
    try {
      out = parse(name);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(child(key) + ": " + e.what());
    }
  }

 private:
  static std::size_t to_count(const json& v, const std::string& path) {
    if (!v.is_number_unsigned()) throw ConfigError(path + ": expected a non-negative integer");
    return v.get<std::size_t>();
  }
  std::string where() const { return path_.empty() ? "" : path_ + ": "; }

  const json& j_;
  std::string path_;
};

PointCost parse_cost(const std::string& s) {
  if (s == "absolute") return PointCost::AbsoluteDifference;
  if (s == "squared") return PointCost::SquaredDifference;
  throw std::invalid_argument("expected 'absolute' or 'squared', got '" + s + "'");
}

ProportionalityConvention parse_convention(const std::string& s) {
  if (s == "speed_cap") return ProportionalityConvention::SpeedCap;
  if (s == "literal") return ProportionalityConvention::Literal;
  throw std::invalid_argument("expected 'speed_cap' or 'literal', got '" + s + "'");
}

ZeroPolicy parse_zero_policy(const std::string& s) {
  if (s == "skip") return ZeroPolicy::Skip;
  if (s == "clamp") return ZeroPolicy::Clamp;
  throw std::invalid_argument("expected 'skip' or 'clamp', got '" + s + "'");
}

void read_scenario(const json& j, ExperimentPlan& plan) {
  Section s(j, "scenario",
            {"arena", "density_mode", "density", "nest_center", "nest_size", "source_size",
             "swarm_sizes", "distribution", "power_law", "n_blocks", "block_respawn", "p_rw",
             "block_step", "performance", "duration", "interval_len", "seed", "robot", "noise",
             "throttle", "population"});
  auto& w = plan.scenario;
  sim::Vec2 arena{w.arena_w, w.arena_h};
  s.get("arena", arena);
  w.arena_w = arena.x;
  w.arena_h = arena.y;
  s.get_enum("density_mode", w.density_mode, sim::parse_density_mode);
  s.get("density", w.density);
  s.get("nest_center", w.nest_center);
  s.get("nest_size", w.nest_size);
  s.get("source_size", w.source_size);
  if (s.has("swarm_sizes")) plan.swarm_sizes = s.counts("swarm_sizes");
  s.get_enum("distribution", w.distribution, sim::parse_distribution);
  if (s.has("power_law")) {
    Section p(s.at("power_law"), "scenario.power_law", {"clusters", "exponent"});
    p.get("clusters", w.power_law.clusters);
    p.get("exponent", w.power_law.exponent);
  }
  s.get("n_blocks", w.n_blocks);
  if (s.has("block_respawn")) {
    bool b = false;
    s.get("block_respawn", b);
    w.block_respawn = b;
  }
  s.get("p_rw", w.p_rw);
  s.get("block_step", w.block_step);
  s.get_enum("performance", w.performance, sim::parse_performance_mode);
  s.get("duration", w.duration);
  s.get("interval_len", w.interval_len);
  s.get_u64("seed", plan.base_seed);

  if (s.has("robot")) {
    Section r(s.at("robot"), "scenario.robot",
              {"max_speed", "max_turn", "interference_radius", "avoid_duration", "pickup_range",
               "sense_radius"});
    r.get("max_speed", w.robot.max_speed);
    r.get("max_turn", w.robot.max_turn);
    r.get("interference_radius", w.robot.interference_radius);
    r.get("avoid_duration", w.robot.avoid_duration);
    r.get("pickup_range", w.robot.pickup_range);
    r.get("sense_radius", w.robot.sense_radius);
  }

  auto& pert = plan.perturbations;
  if (s.has("noise")) {
    Section n(s.at("noise"), "scenario.noise", {"sigma", "channels"});
    n.get("sigma", pert.noise.sigma);
    if (n.has("channels")) {
      const auto& arr = n.at("channels");
      if (!arr.is_array()) throw ConfigError("scenario.noise.channels: expected an array of names");
      pert.noise.channels = 0;
      for (const auto& c : arr) {
        if (!c.is_string()) throw ConfigError("scenario.noise.channels: expected an array of names");
        try {
          pert.noise.channels |= static_cast<std::uint32_t>(sim::parse_noise_channel(c.get<std::string>()));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string("scenario.noise.channels: ") + e.what());
        }
      }
    }
  }
  if (s.has("throttle")) {
    Section t(s.at("throttle"), "scenario.throttle",
              {"waveform", "amplitude", "period", "phase", "target", "ideal_level"});
    VarianceProfile v;
    t.get_enum("waveform", v.deviation.kind, parse_waveform_kind);
    t.get("amplitude", v.deviation.amplitude);
    t.get("period", v.deviation.period);
    t.get("phase", v.deviation.phase);
    t.get_enum("target", v.target, parse_deviation_target);
    t.get("ideal_level", v.ideal_level);
    pert.throttle = v;
  }
  if (s.has("population")) {
    Section p(s.at("population"), "scenario.population",
              {"lambda_d", "lambda_bd", "mu_b", "mu_bd", "initial_tasked"});
    sim::PopulationProfile prof;
    p.get("lambda_d", prof.rates.lambda_d);
    p.get("lambda_bd", prof.rates.lambda_bd);
    p.get("mu_b", prof.rates.mu_b);
    p.get("mu_bd", prof.rates.mu_bd);
    p.get("initial_tasked", prof.initial_tasked);
    pert.population = prof;
  }
}

void read_controllers(const json& j, ExperimentPlan& plan) {
  if (!j.is_array()) throw ConfigError("controllers: expected an array");
  plan.controllers.clear();
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = "controllers[" + std::to_string(i) + "]";
    sim::ControllerSpec spec;
    auto parse_kind = [&](const std::string& name) {
      try {
        return sim::parse_controller_kind(name);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
      }
    };
    if (j[i].is_string()) {
      spec.kind = parse_kind(j[i].get<std::string>());
    } else {
      Section c(j[i], path, {"kind", "turn_stddev", "decay_rho", "sense_radius", "relevance_floor"});
      if (!c.has("kind")) throw ConfigError(path + ": missing key 'kind'");
      std::string kind;
      c.get("kind", kind);
      spec.kind = parse_kind(kind);
      c.get("turn_stddev", spec.crw.turn_stddev);
      spec.dpo.exploration = spec.crw;
      if (spec.kind == sim::ControllerKind::Crw) {
        for (const char* k : {"decay_rho", "sense_radius", "relevance_floor"})
          if (c.has(k)) throw ConfigError(path + "." + k + ": only valid for dpo");
      }
      c.get("decay_rho", spec.dpo.decay_rho);
      c.get("sense_radius", spec.dpo.sense_radius);
      c.get("relevance_floor", spec.dpo.relevance_floor);
    }
    plan.controllers.push_back(spec);
  }
}

void read_sweeps(const json& j, ExperimentPlan& plan) {
  Section s(j, "sweeps", {"runs", "noise_sigma", "throttle_amplitude", "population_rates", "p_rw"});
  s.get("runs", plan.n_runs);
  plan.sweeps.clear();
  for (const char* axis : {"noise_sigma", "throttle_amplitude", "population_rates", "p_rw"}) {
    if (!s.has(axis)) continue;
    plan.sweeps.push_back({parse_sweep_axis(axis), s.numbers(axis)});
  }
}

void read_metrics(const json& j, ExperimentPlan& plan) {
  Section s(j, "metrics",
            {"requested", "dtw", "convention", "zero_policy", "clamp_epsilon", "literal_numerator",
             "n_min"});
  if (s.has("requested")) {
    const auto& arr = s.at("requested");
    if (!arr.is_array()) throw ConfigError("metrics.requested: expected an array of names");
    plan.metrics.clear();
    for (const auto& m : arr) {
      if (!m.is_string()) throw ConfigError("metrics.requested: expected an array of names");
      try {
        plan.metrics.push_back(parse_metric(m.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("metrics.requested: ") + e.what());
      }
    }
  }
  auto& o = plan.options;
  if (s.has("dtw")) {
    Section d(s.at("dtw"), "metrics.dtw", {"cost", "window"});
    d.get_enum("cost", o.dtw.cost, parse_cost);
    if (d.has("window")) {
      std::size_t w = 0;
      d.get("window", w);
      o.dtw.window = w;
    }
  }
  s.get_enum("convention", o.convention, parse_convention);
  s.get_enum("zero_policy", o.scalability.zero_policy, parse_zero_policy);
  s.get("clamp_epsilon", o.scalability.clamp_epsilon);
  s.get("literal_numerator", o.scalability.literal_numerator);
  if (s.has("n_min")) o.n_min = s.counts("n_min");
}

void read_output(const json& j, OutputSettings& out) {
  Section s(j, "output", {"dir", "trace", "workers"});
  std::string dir = out.dir.string();
  s.get("dir", dir);
  out.dir = dir;
  s.get("trace", out.trace);
  if (s.has("workers")) {
    std::size_t w = 0;
    s.get("workers", w);
    if (w == 0) throw ConfigError("output.workers: must be >= 1");
    out.workers = w;
  }
}

}  // namespace

ConfigFile parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  Section top(j, "", {"description", "scenario", "controllers", "sweeps", "metrics", "output"});
  ConfigFile cfg;
  cfg.plan.controllers = {sim::ControllerSpec{}};
  cfg.plan.swarm_sizes = {cfg.plan.scenario.n_robots};
  top.get("description", cfg.description);
  if (top.has("scenario")) read_scenario(j.at("scenario"), cfg.plan);
  if (top.has("controllers")) read_controllers(j.at("controllers"), cfg.plan);
  if (top.has("sweeps")) read_sweeps(j.at("sweeps"), cfg.plan);
  if (top.has("metrics")) read_metrics(j.at("metrics"), cfg.plan);
  if (top.has("output")) read_output(j.at("output"), cfg.output);
  cfg.plan.scenario.seed = cfg.plan.base_seed;
  if (!cfg.plan.swarm_sizes.empty()) cfg.plan.scenario.n_robots = cfg.plan.swarm_sizes.front();

  try {
    cfg.plan.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ConfigFile load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text);
}

std::string config_to_json(const ConfigFile& cfg) {
  const auto& plan = cfg.plan;
  const auto& w = plan.scenario;
  ojson scenario;
  scenario["arena"] = {w.arena_w, w.arena_h};
  scenario["density_mode"] = sim::to_string(w.density_mode);
  scenario["density"] = w.density;
  scenario["nest_center"] = {w.nest_center.x, w.nest_center.y};
  scenario["nest_size"] = {w.nest_size.x, w.nest_size.y};
  scenario["source_size"] = {w.source_size.x, w.source_size.y};
  scenario["swarm_sizes"] = plan.swarm_sizes;
  scenario["distribution"] = sim::to_string(w.distribution);
  scenario["power_law"] = {{"clusters", w.power_law.clusters}, {"exponent", w.power_law.exponent}};
  scenario["n_blocks"] = w.n_blocks;
  scenario["block_respawn"] = w.respawn();
  scenario["p_rw"] = w.p_rw;
  scenario["block_step"] = w.block_step;
  scenario["performance"] = sim::to_string(w.performance);
  scenario["duration"] = w.duration;
  scenario["interval_len"] = w.interval_len;
  scenario["seed"] = plan.base_seed;
  scenario["robot"] = {{"max_speed", w.robot.max_speed},
                       {"max_turn", w.robot.max_turn},
                       {"interference_radius", w.robot.interference_radius},
                       {"avoid_duration", w.robot.avoid_duration},
                       {"pickup_range", w.robot.pickup_range},
                       {"sense_radius", w.robot.sense_radius}};
  const auto& p = plan.perturbations;
  ojson channels = ojson::array();
  for (std::uint32_t bit = 1; bit <= sim::kAllNoiseChannels; bit <<= 1)
    if (p.noise.channels & bit) channels.push_back(sim::to_string(static_cast<sim::NoiseChannel>(bit)));
  scenario["noise"] = {{"sigma", p.noise.sigma}, {"channels", channels}};
  if (p.throttle) {
    const auto& t = *p.throttle;
    scenario["throttle"] = {{"waveform", to_string(t.deviation.kind)},
                            {"amplitude", t.deviation.amplitude},
                            {"period", t.deviation.period},
                            {"phase", t.deviation.phase},
                            {"target", to_string(t.target)},
                            {"ideal_level", t.ideal_level}};
  }
  if (p.population) {
    const auto& r = p.population->rates;
    scenario["population"] = {{"lambda_d", r.lambda_d},
                              {"lambda_bd", r.lambda_bd},
                              {"mu_b", r.mu_b},
                              {"mu_bd", r.mu_bd},
                              {"initial_tasked", p.population->initial_tasked}};
  }

  ojson controllers = ojson::array();
  for (const auto& c : plan.controllers) {
    ojson e;
    e["kind"] = c.id();
    if (c.kind == sim::ControllerKind::Crw) {
      e["turn_stddev"] = c.crw.turn_stddev;
    } else {
      e["turn_stddev"] = c.dpo.exploration.turn_stddev;
      e["decay_rho"] = c.dpo.decay_rho;
      e["sense_radius"] = c.dpo.sense_radius;
      e["relevance_floor"] = c.dpo.relevance_floor;
    }
    controllers.push_back(e);
  }

  ojson sweeps;
  sweeps["runs"] = plan.n_runs;
  for (const auto& s : plan.sweeps) sweeps[to_string(s.axis)] = s.values;

  ojson metrics;
  ojson requested = ojson::array();
  for (Metric m : plan.metrics) requested.push_back(to_string(m));
  metrics["requested"] = requested;
  const auto& o = plan.options;
  metrics["dtw"] = {{"cost", o.dtw.cost == PointCost::AbsoluteDifference ? "absolute" : "squared"},
                    {"window", o.dtw.window ? ojson(*o.dtw.window) : ojson(nullptr)}};
  metrics["convention"] = o.convention == ProportionalityConvention::SpeedCap ? "speed_cap" : "literal";
  metrics["zero_policy"] = o.scalability.zero_policy == ZeroPolicy::Skip ? "skip" : "clamp";
  metrics["clamp_epsilon"] = o.scalability.clamp_epsilon;
  metrics["literal_numerator"] = o.scalability.literal_numerator;
  metrics["n_min"] = o.n_min;

  ojson output;
  output["dir"] = cfg.output.dir.string();
  output["trace"] = cfg.output.trace;
  output["workers"] = cfg.output.workers ? ojson(*cfg.output.workers) : ojson(nullptr);

  ojson doc;
  if (!cfg.description.empty()) doc["description"] = cfg.description;
  doc["scenario"] = scenario;
  doc["controllers"] = controllers;
  doc["sweeps"] = sweeps;
  doc["metrics"] = metrics;
  doc["output"] = output;
  return doc.dump(2) + "\n";
}

}  // namespace swarmetrics
