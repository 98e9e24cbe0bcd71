#include "swarmetrics/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "swarmetrics/io_util.hpp"

namespace swarmetrics::sim {

namespace {

constexpr double kBlockSpacing = 0.1;  // minimum area per block is kBlockSpacing^2
constexpr int kMaxRejections = 10000;

double cluster_side(std::size_t size) { return 0.3 * std::sqrt(static_cast<double>(size)) + 0.3; }

}  // namespace

DensityMode parse_density_mode(const std::string& name) {
  if (name == "variable") return DensityMode::Variable;
  if (name == "constant") return DensityMode::Constant;
  throw std::invalid_argument("unknown density mode '" + name + "'");
}

BlockDistribution parse_distribution(const std::string& name) {
  if (name == "single_source") return BlockDistribution::SingleSource;
  if (name == "random") return BlockDistribution::Random;
  if (name == "power_law") return BlockDistribution::PowerLaw;
  throw std::invalid_argument("unknown block distribution '" + name + "'");
}

PerformanceMode parse_performance_mode(const std::string& name) {
  if (name == "transport") return PerformanceMode::Transport;
  if (name == "discovery") return PerformanceMode::Discovery;
  throw std::invalid_argument("unknown performance mode '" + name + "'");
}

std::string to_string(DensityMode m) { return m == DensityMode::Variable ? "variable" : "constant"; }

std::string to_string(BlockDistribution d) {
  switch (d) {
    case BlockDistribution::SingleSource: return "single_source";
    case BlockDistribution::Random: return "random";
    case BlockDistribution::PowerLaw: return "power_law";
  }
  return "?";
}

std::string to_string(PerformanceMode m) {
  return m == PerformanceMode::Transport ? "transport" : "discovery";
}

std::string to_string(RobotMode m) {
  switch (m) {
    case RobotMode::Exploring: return "exploring";
    case RobotMode::Homing: return "homing";
    case RobotMode::Avoiding: return "avoiding";
  }
  return "?";
}

Rect resolve_arena(const WorldConfig& c) {
  if (c.density_mode == DensityMode::Variable) return {0.0, 0.0, c.arena_w, c.arena_h};
  const double area = static_cast<double>(std::max<std::size_t>(c.n_robots, 1)) / c.density;
  const double aspect = c.arena_w / c.arena_h;
  const double w = std::sqrt(area * aspect);
  return {0.0, 0.0, w, area / w};
}

namespace {

Rect resolve_nest(const WorldConfig& c, const Rect& arena) {
  if (c.nest_size.x > arena.width() || c.nest_size.y > arena.height())
    throw std::invalid_argument("nest does not fit inside the arena");
  Vec2 center{c.nest_center.x * arena.width(), c.nest_center.y * arena.height()};
  // Shift the nest inward so it lies within the arena.
  center.x = std::clamp(center.x, c.nest_size.x / 2, arena.width() - c.nest_size.x / 2);
  center.y = std::clamp(center.y, c.nest_size.y / 2, arena.height() - c.nest_size.y / 2);
  return Rect::centered(center, c.nest_size.x, c.nest_size.y);
}

Rect resolve_source(const WorldConfig& c, const Rect& arena, const Rect& nest) {
  const Vec2 nc = nest.center();
  const Vec2 center{arena.width() - nc.x, nc.y};
  return Rect::centered(center, c.source_size.x, c.source_size.y).intersect(arena);
}

double overlap_area(const Rect& a, const Rect& b) {
  const Rect r = a.intersect(b);
  return (r.width() > 0 && r.height() > 0) ? r.area() : 0.0;
}

}  // namespace

void WorldConfig::validate() const {
  if (!(arena_w > 0.0 && arena_h > 0.0)) throw std::invalid_argument("arena dimensions must be > 0");
  if (density_mode == DensityMode::Constant && !(density > 0.0))
    throw std::invalid_argument("constant density mode needs density > 0");
  if (!(nest_size.x > 0.0 && nest_size.y > 0.0)) throw std::invalid_argument("nest size must be > 0");
  if (nest_center.x < 0.0 || nest_center.x > 1.0 || nest_center.y < 0.0 || nest_center.y > 1.0)
    throw std::invalid_argument("nest centre fractions must lie in [0,1]");
  if (n_blocks < 1) throw std::invalid_argument("n_blocks must be >= 1");
  if (!(p_rw >= 0.0 && p_rw <= 1.0)) throw std::invalid_argument("p_rw must lie in [0,1]");
  if (!(block_step >= 0.0)) throw std::invalid_argument("block_step must be >= 0");
  if (interval_len == 0) throw std::invalid_argument("interval_len must be >= 1");
  if (duration == 0) throw std::invalid_argument("duration must be >= 1");
  if (distribution == BlockDistribution::PowerLaw) {
    if (power_law.clusters == 0) throw std::invalid_argument("power_law needs >= 1 cluster");
    if (n_blocks < power_law.clusters)
      throw std::invalid_argument("power_law needs n_blocks >= clusters");
    if (!(power_law.exponent > 0.0)) throw std::invalid_argument("power_law exponent must be > 0");
  }
  if (distribution == BlockDistribution::SingleSource &&
      !(source_size.x > 0.0 && source_size.y > 0.0))
    throw std::invalid_argument("source size must be > 0");
  const auto& r = robot;
  if (!(r.max_speed > 0.0 && r.max_turn > 0.0 && r.interference_radius >= 0.0 &&
        r.pickup_range > 0.0 && r.sense_radius >= r.pickup_range))
    throw std::invalid_argument("robot parameters out of range");
  if (r.avoid_duration == 0) throw std::invalid_argument("avoid_duration must be >= 1");

  const Rect arena = resolve_arena(*this);
  const Rect nest = resolve_nest(*this, arena);
  if (!arena.contains(nest)) throw std::invalid_argument("nest must lie within the arena");
}

std::string Perturbations::describe() const {
  std::vector<std::string> parts;
  if (noise.sigma > 0.0) parts.push_back("noise-sigma-" + format_double(noise.sigma));
  if (throttle && throttle->deviation.amplitude > 0.0)
    parts.push_back("throttle-" + to_string(throttle->deviation.kind) + "-" +
                    format_double(throttle->deviation.amplitude));
  if (population && population->active()) {
    const auto& r = population->rates;
    parts.push_back("population-" + format_double(r.lambda_d) + "-" + format_double(r.lambda_bd) +
                    "-" + format_double(r.mu_b) + "-" + format_double(r.mu_bd));
  }
  if (parts.empty()) return "ideal";
  std::string out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out += "+" + parts[i];
  return out;
}

std::vector<std::size_t> power_law_cluster_sizes(std::size_t n_blocks, const PowerLawParams& params,
                                                 RandomStream& rng) {
  const std::size_t k = params.clusters;
  if (k == 0 || n_blocks < k) throw std::invalid_argument("power_law needs 1 <= clusters <= n_blocks");

  // Inverse-CDF table for P(s) ~ s^-exponent on [1, n_blocks].
  std::vector<double> cdf(n_blocks);
  double total = 0.0;
  for (std::size_t s = 1; s <= n_blocks; ++s) {
    total += std::pow(static_cast<double>(s), -params.exponent);
    cdf[s - 1] = total;
  }
  std::vector<double> draws(k);
  double draw_sum = 0.0;
  for (auto& d : draws) {
    const double u = rng.uniform() * total;
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    d = static_cast<double>(std::distance(cdf.begin(), it) + 1);
    draw_sum += d;
  }

  // Every cluster gets one block; the rest is split by largest remainder.
  std::vector<std::size_t> sizes(k, 1);
  const std::size_t spare = n_blocks - k;
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double share = static_cast<double>(spare) * draws[i] / draw_sum;
    const auto whole = static_cast<std::size_t>(std::floor(share));
    sizes[i] += whole;
    assigned += whole;
    remainders.emplace_back(share - static_cast<double>(whole), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t j = 0; assigned < spare; ++j, ++assigned) ++sizes[remainders[j % k].second];
  return sizes;
}

World::World(WorldConfig config, ControllerSpec controller, Perturbations perturbations)
    : config_(std::move(config)),
      controller_spec_(std::move(controller)),
      perturbations_(std::move(perturbations)),
      placement_rng_(config_.seed, Stream::Placement),
      noise_rng_(config_.seed, Stream::Noise),
      population_rng_(config_.seed, Stream::Population),
      motion_rng_(config_.seed, Stream::BlockMotion) {
  config_.validate();
  controller_spec_.validate();
  perturbations_.noise.validate();
  if (perturbations_.throttle) perturbations_.throttle->validate();
  if (perturbations_.population) {
    auto& pop = *perturbations_.population;
    if (pop.max_population == 0) pop.max_population = config_.n_robots;
    if (pop.initial_tasked == 0) pop.initial_tasked = config_.n_robots;
    if (pop.max_population != config_.n_robots)
      throw std::invalid_argument("population max must equal n_robots");
    pop.validate();
  }

  arena_ = resolve_arena(config_);
  nest_ = resolve_nest(config_, arena_);
  source_ = resolve_source(config_, arena_, nest_);
  noise_scales_.position = std::hypot(arena_.width(), arena_.height());
  noise_scales_.block_detect = config_.robot.sense_radius;
  noise_scales_.speed = config_.robot.max_speed;
  noise_scales_.turn = config_.robot.max_turn;

  place_initial_blocks();

  const std::size_t n = config_.n_robots;
  const std::size_t tasked =
      perturbations_.population ? perturbations_.population->initial_tasked : n;
  robots_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = robots_[i];
    r.position = sample_outside_nest(arena_, placement_rng_);
    r.heading = placement_rng_.uniform(-std::numbers::pi, std::numbers::pi);
    r.status = i < tasked ? RobotStatus::Tasked : RobotStatus::Reserve;
    controllers_.push_back(make_controller(controller_spec_));
    controller_rngs_.emplace_back(config_.seed, Stream::Controller, i);
  }
}

Vec2 World::sample_outside_nest(const Rect& region, RandomStream& rng) {
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    Vec2 p{rng.uniform(region.x0, region.x1), rng.uniform(region.y0, region.y1)};
    if (!nest_.contains(p)) return p;
  }
  throw std::invalid_argument("cannot place an object outside the nest in the given region");
}

void World::place_initial_blocks() {
  const std::size_t n = config_.n_blocks;
  const double min_area = static_cast<double>(n) * kBlockSpacing * kBlockSpacing;
  blocks_.assign(n, Block{});

  switch (config_.distribution) {
    case BlockDistribution::SingleSource: {
      const double free = source_.area() - overlap_area(source_, nest_);
      if (!(source_.width() > 0 && source_.height() > 0) || free < min_area)
        throw std::invalid_argument("infeasible placement: source area too small for n_blocks");
      clusters_ = {source_};
      break;
    }
    case BlockDistribution::Random: {
      if (arena_.area() - nest_.area() < min_area)
        throw std::invalid_argument("infeasible placement: arena too small for n_blocks");
      clusters_ = {arena_};
      break;
    }
    case BlockDistribution::PowerLaw: {
      if (arena_.area() - nest_.area() < min_area)
        throw std::invalid_argument("infeasible placement: arena too small for n_blocks");
      auto sizes = power_law_cluster_sizes(n, config_.power_law, placement_rng_);
      std::size_t next = 0;
      for (std::size_t k = 0; k < sizes.size(); ++k) {
        const double side = std::min({cluster_side(sizes[k]), arena_.width(), arena_.height()});
        const Rect centres{arena_.x0 + side / 2, arena_.y0 + side / 2, arena_.x1 - side / 2,
                           arena_.y1 - side / 2};
        const Vec2 c = sample_outside_nest(centres, placement_rng_);
        const Rect rect = Rect::centered(c, side, side).intersect(arena_);
        if (rect.area() - overlap_area(rect, nest_) <
            static_cast<double>(sizes[k]) * kBlockSpacing * kBlockSpacing)
          throw std::invalid_argument("infeasible placement: cluster overlaps the nest");
        clusters_.push_back(rect);
        for (std::size_t j = 0; j < sizes[k]; ++j) blocks_[next++].cluster = k;
      }
      break;
    }
  }
  for (auto& b : blocks_) {
    b.position = sample_block_position(b.cluster);
    b.state = BlockState::Free;
  }
}

Vec2 World::sample_block_position(std::size_t cluster) {
  return sample_outside_nest(clusters_.at(cluster), placement_rng_);
}

Vec2 World::nest_edge_point() {
  const double w = nest_.width();
  const double h = nest_.height();
  double u = population_rng_.uniform() * 2.0 * (w + h);
  if (u < w) return {nest_.x0 + u, nest_.y0};
  u -= w;
  if (u < h) return {nest_.x1, nest_.y0 + u};
  u -= h;
  if (u < w) return {nest_.x1 - u, nest_.y1};
  u -= w;
  return {nest_.x0, nest_.y1 - u};
}

std::size_t World::count_blocks(BlockState state) const {
  return static_cast<std::size_t>(
      std::count_if(blocks_.begin(), blocks_.end(), [state](const Block& b) { return b.state == state; }));
}

std::size_t World::tasked_count() const {
  return static_cast<std::size_t>(
      std::count_if(robots_.begin(), robots_.end(), [](const Robot& r) { return r.active(); }));
}

void World::place_robot(std::size_t robot, Vec2 position, double heading) {
  auto& r = robots_.at(robot);
  r.position = arena_.clamp(position);
  r.heading = wrap_angle(heading);
}

void World::place_block(BlockId block, Vec2 position) {
  auto& b = blocks_.at(block);
  if (b.state != BlockState::Free) throw std::logic_error("place_block: block is not free");
  b.position = arena_.clamp(position);
}

void World::set_trace(std::ostream* out) { trace_ = out; }

void World::release_block(Robot& robot) {
  if (!robot.carried) return;
  auto& b = blocks_[*robot.carried];
  b.state = BlockState::Free;
  b.position = nest_.contains(robot.position) ? sample_block_position(b.cluster) : robot.position;
  robot.carried.reset();
}

void World::deposit(Block& block) {
  ++stats_.collected;
  if (config_.respawn()) {
    block.state = BlockState::Free;
    block.position = sample_block_position(block.cluster);
    block.discovered = false;
  } else {
    block.state = BlockState::InNest;
    block.position = nest_.center();
  }
}

void World::apply_population_events() {
  if (!perturbations_.population || !perturbations_.population->active()) return;
  std::vector<RobotStatus> statuses;
  statuses.reserve(robots_.size());
  for (const auto& r : robots_) statuses.push_back(r.status);
  const auto events = population_events(*perturbations_.population, statuses, population_rng_);

  for (std::size_t i = 0; i < robots_.size(); ++i) {
    auto& r = robots_[i];
    switch (events[i]) {
      case PopulationEvent::None:
        break;
      case PopulationEvent::RemovePermanent:
      case PopulationEvent::RemoveTemporary:
        release_block(r);
        r.status = events[i] == PopulationEvent::RemovePermanent ? RobotStatus::Removed
                                                                 : RobotStatus::Absent;
        r.mode = RobotMode::Exploring;
        r.avoid_countdown = 0;
        break;
      case PopulationEvent::Return:
      case PopulationEvent::Add:
        // Rejoining robots start at the nest edge with no world model.
        r.status = RobotStatus::Tasked;
        r.position = arena_.clamp(nest_edge_point());
        r.heading = population_rng_.uniform(-std::numbers::pi, std::numbers::pi);
        r.mode = RobotMode::Exploring;
        r.search_distance = 0.0;
        controllers_[i]->reset();
        break;
    }
  }
}

void World::move_blocks() {
  if (config_.p_rw <= 0.0) return;
  static constexpr Vec2 kDirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (auto& b : blocks_) {
    if (b.state != BlockState::Free) continue;
    if (motion_rng_.uniform() >= config_.p_rw) continue;
    const Vec2 next = arena_.clamp(b.position + kDirs[motion_rng_.below(4)] * config_.block_step);
    if (!nest_.contains(next)) b.position = next;
  }
}

Sensed World::sense(const Robot& robot) {
  const auto& noise = perturbations_.noise;
  Sensed s;
  s.position = perturb_position(robot.position, NoiseChannel::PositionSense, noise, noise_scales_,
                                arena_, noise_rng_);
  s.beacon_bearing = perturb_angle((nest_.center() - robot.position).angle(),
                                   NoiseChannel::BearingSense, noise, noise_scales_, noise_rng_);
  s.in_nest = nest_.contains(s.position);

  const double radius = config_.robot.sense_radius;
  for (std::size_t id = 0; id < blocks_.size(); ++id) {
    const auto& b = blocks_[id];
    if (b.state != BlockState::Free) continue;
    Vec2 rel = b.position - robot.position;
    if (rel.norm() > radius) continue;
    rel.x = perturb(rel.x, NoiseChannel::BlockDetect, noise, noise_scales_, noise_rng_);
    rel.y = perturb(rel.y, NoiseChannel::BlockDetect, noise, noise_scales_, noise_rng_);
    SeenBlock seen;
    seen.id = id;
    seen.relative = rel;
    seen.world = s.position + rel;
    seen.distance = rel.norm();
    seen.in_pickup_range = seen.distance <= config_.robot.pickup_range;
    s.blocks.push_back(seen);
  }
  return s;
}

StepEvents World::step() {
  StepEvents ev;
  const auto& rp = config_.robot;
  const auto& noise = perturbations_.noise;

  apply_population_events();
  move_blocks();

  double throttle = 1.0;
  if (perturbations_.throttle) throttle = throttle_factor(*perturbations_.throttle, t_);

  struct Intent {
    std::optional<BlockId> pickup;
    bool drop = false;
  };
  std::vector<Intent> intents(robots_.size());

  for (std::size_t i = 0; i < robots_.size(); ++i) {
    auto& r = robots_[i];
    if (!r.active()) continue;

    const Sensed sensed = sense(r);
    const Action action =
        controllers_[i]->decide({r.heading, r.carrying()}, sensed, controller_rngs_[i]);

    double turn = 0.0;
    double speed = rp.max_speed;
    if (r.mode != RobotMode::Avoiding) {
      turn = std::clamp(action.turn, -rp.max_turn, rp.max_turn);
      speed = std::clamp(action.speed, 0.0, 1.0) * rp.max_speed;
      intents[i] = Intent{action.pickup, action.drop};
    }
    turn = perturb(turn, NoiseChannel::TurnActuation, noise, noise_scales_, noise_rng_);
    if (speed > 0.0) {
      speed = perturb(speed, NoiseChannel::SpeedActuation, noise, noise_scales_, noise_rng_);
    }
    double cap = rp.max_speed;
    if (perturbations_.throttle && throttle_applies(perturbations_.throttle->target, r.carrying()))
      cap *= throttle;
    speed = std::clamp(speed, 0.0, cap);

    r.heading = wrap_angle(r.heading + turn);
    Vec2 next = r.position + unit(r.heading) * speed;
    // Reflect off the walls.
    if (next.x < arena_.x0 || next.x > arena_.x1) {
      r.heading = wrap_angle(std::numbers::pi - r.heading);
      next.x = std::clamp(next.x, arena_.x0, arena_.x1);
    }
    if (next.y < arena_.y0 || next.y > arena_.y1) {
      r.heading = wrap_angle(-r.heading);
      next.y = std::clamp(next.y, arena_.y0, arena_.y1);
    }
    if (!r.carrying()) r.search_distance += distance(r.position, next);
    r.position = next;
    if (r.carried) blocks_[*r.carried].position = r.position;

    if (r.mode == RobotMode::Avoiding) {
      if (--r.avoid_countdown == 0) r.mode = r.carrying() ? RobotMode::Homing : RobotMode::Exploring;
    } else {
      r.mode = r.carrying() ? RobotMode::Homing : RobotMode::Exploring;
    }
  }

  // Interference: both robots of a close pair back off.
  const double r2 = rp.interference_radius * rp.interference_radius;
  for (std::size_t i = 0; i < robots_.size(); ++i) {
    if (!robots_[i].active()) continue;
    for (std::size_t j = i + 1; j < robots_.size(); ++j) {
      if (!robots_[j].active()) continue;
      const Vec2 d = robots_[j].position - robots_[i].position;
      if (d.x * d.x + d.y * d.y > r2) continue;
      auto& a = robots_[i];
      auto& b = robots_[j];
      const double away = (d.x == 0.0 && d.y == 0.0) ? a.heading + std::numbers::pi : d.angle();
      a.mode = b.mode = RobotMode::Avoiding;
      a.avoid_countdown = b.avoid_countdown = rp.avoid_duration;
      a.heading = wrap_angle(away + std::numbers::pi);
      b.heading = wrap_angle(away);
    }
  }

  for (std::size_t i = 0; i < robots_.size(); ++i) {
    auto& r = robots_[i];
    if (!r.active()) continue;
    const auto& in = intents[i];
    if (in.drop && r.carried && nest_.contains(r.position)) {
      auto& b = blocks_[*r.carried];
      r.carried.reset();
      deposit(b);
      ++ev.collected;
      if (r.mode != RobotMode::Avoiding) r.mode = RobotMode::Exploring;
    } else if (in.pickup && !r.carried && *in.pickup < blocks_.size()) {
      auto& b = blocks_[*in.pickup];
      if (b.state == BlockState::Free && distance(b.position, r.position) <= rp.pickup_range) {
        b.state = BlockState::Carried;
        b.position = r.position;
        r.carried = *in.pickup;
        if (r.mode != RobotMode::Avoiding) r.mode = RobotMode::Homing;
        if (!b.discovered) {
          b.discovered = true;
          ++ev.first_pickups;
          ++stats_.first_pickups;
        }
        ++stats_.pickups;
        stats_.search_distance += r.search_distance;
        r.search_distance = 0.0;
      }
    }
  }

  for (std::size_t i = 0; i < robots_.size(); ++i) {
    const auto& r = robots_[i];
    if (!r.active()) continue;
    ++ev.active;
    if (r.mode == RobotMode::Avoiding) ++ev.avoiding;
    if (trace_) {
      *trace_ << t_ << ',' << i << ',' << format_double(r.position.x) << ','
              << format_double(r.position.y) << ',' << to_string(r.mode) << '\n';
    }
  }
  ev.tasked = ev.active;
  ++t_;
  return ev;
}

RunResult simulate(const WorldConfig& config, const ControllerSpec& controller,
                   const Perturbations& perturbations, std::ostream* trace) {
  World world(config, controller, perturbations);
  world.set_trace(trace);
  if (trace) *trace << "t,robot,x,y,mode\n";

  const std::size_t len = config.interval_len;
  const std::size_t n_intervals = config.duration / len;
  std::vector<double> perf, intf, pop;
  perf.reserve(n_intervals);

  double events = 0.0;
  double avoiding = 0.0;
  double active = 0.0;
  std::size_t tasked = world.tasked_count();
  for (std::size_t t = 0; t < config.duration; ++t) {
    const auto ev = world.step();
    events += static_cast<double>(config.performance == PerformanceMode::Transport
                                      ? ev.collected
                                      : ev.first_pickups);
    avoiding += static_cast<double>(ev.avoiding);
    active += static_cast<double>(ev.active);
    tasked = ev.tasked;
    if ((t + 1) % len == 0) {
      perf.push_back(events / static_cast<double>(len));
      intf.push_back(active > 0.0 ? std::clamp(avoiding / active, 0.0, 1.0) : 0.0);
      pop.push_back(static_cast<double>(tasked));
      events = avoiding = active = 0.0;
    }
  }

  CurveInfo info{len, std::max<std::size_t>(config.n_robots, 1), controller.id(),
                 perturbations.describe()};
  RunResult out;
  out.bundle.performance = PerformanceCurve(std::move(perf), info);
  out.bundle.interference = InterferenceCurve(std::move(intf), info);
  out.bundle.population = PopulationCurve(std::move(pop), len);
  out.bundle.run_seed = config.seed;
  out.stats = world.stats();
  return out;
}

CurveBundle run(const WorldConfig& config, const ControllerSpec& controller,
                const Perturbations& perturbations) {
  return simulate(config, controller, perturbations).bundle;
}

}  // namespace swarmetrics::sim
