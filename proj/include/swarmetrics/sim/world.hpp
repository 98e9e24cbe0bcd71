#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmetrics/curves.hpp"
#include "swarmetrics/flexibility.hpp"
#include "swarmetrics/sim/controllers.hpp"
#include "swarmetrics/sim/geometry.hpp"
#include "swarmetrics/sim/perturb.hpp"
#include "swarmetrics/sim/rng.hpp"

namespace swarmetrics::sim {

enum class DensityMode { Variable, Constant };
enum class BlockDistribution { SingleSource, Random, PowerLaw };
/// Which event counts as performance: blocks delivered to the nest, or
/// blocks picked up for the first time (search and rescue).
enum class PerformanceMode { Transport, Discovery };

DensityMode parse_density_mode(const std::string& name);
BlockDistribution parse_distribution(const std::string& name);
PerformanceMode parse_performance_mode(const std::string& name);
std::string to_string(DensityMode m);
std::string to_string(BlockDistribution d);
std::string to_string(PerformanceMode m);

struct PowerLawParams {
  std::size_t clusters = 4;
  double exponent = 2.0;
};

// Calibration knobs, not measured values.
struct RobotParams {
  double max_speed = 0.1;  // m per step
  double max_turn = 0.5;   // rad per step
  double interference_radius = 0.3;
  std::size_t avoid_duration = 10;
  double pickup_range = 0.2;
  double sense_radius = 1.0;
};

struct WorldConfig {
  double arena_w = 16.0;
  double arena_h = 16.0;
  DensityMode density_mode = DensityMode::Variable;
  double density = 0.0625;  // robots per m^2, constant mode only
  /// Nest centre as a fraction of the arena extent, and its size in metres.
  Vec2 nest_center{0.15, 0.5};
  Vec2 nest_size{2.0, 2.0};
  /// Single-source cluster size in metres; centred opposite the nest.
  Vec2 source_size{2.0, 4.0};
  std::size_t n_robots = 16;
  BlockDistribution distribution = BlockDistribution::Random;
  PowerLawParams power_law;
  std::size_t n_blocks = 32;
  /// Defaults to true for transport and false for discovery.
  std::optional<bool> block_respawn;
  double p_rw = 0.0;
  double block_step = 0.1;
  PerformanceMode performance = PerformanceMode::Transport;
  std::size_t duration = 20000;
  std::uint64_t seed = 1;
  std::size_t interval_len = 1000;
  RobotParams robot;

  bool respawn() const {
    return block_respawn.value_or(performance == PerformanceMode::Transport);
  }
  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

struct Perturbations {
  std::optional<VarianceProfile> throttle;
  NoiseProfile noise;
  std::optional<PopulationProfile> population;

  /// Free-form label such as "ideal" or "noise-sigma-0.02".
  std::string describe() const;
};

enum class RobotMode { Exploring, Homing, Avoiding };
std::string to_string(RobotMode m);

struct Robot {
  Vec2 position;
  double heading = 0.0;
  RobotMode mode = RobotMode::Exploring;
  std::size_t avoid_countdown = 0;
  std::optional<BlockId> carried;
  RobotStatus status = RobotStatus::Tasked;
  double search_distance = 0.0;  // travelled since the last drop

  bool active() const { return status == RobotStatus::Tasked; }
  bool carrying() const { return carried.has_value(); }
};

enum class BlockState { Free, Carried, InNest };

struct Block {
  Vec2 position;
  std::size_t cluster = 0;
  BlockState state = BlockState::Free;
  bool discovered = false;  // latched at the first pickup
};

struct StepEvents {
  std::size_t collected = 0;
  std::size_t first_pickups = 0;
  std::size_t avoiding = 0;
  std::size_t active = 0;
  std::size_t tasked = 0;
};

struct RunStats {
  std::size_t collected = 0;
  std::size_t first_pickups = 0;
  std::size_t pickups = 0;
  double search_distance = 0.0;  // summed over pickups

  double mean_search_distance() const {
    return pickups ? search_distance / static_cast<double>(pickups) : 0.0;
  }
};

/// Discrete-time 2D foraging world. Single-threaded and fully determined by
/// (config, controller, perturbations).
///
/// Per step: population events, block random walk, sense/decide/act for each
/// active robot, interference resolution, pickup/drop resolution, recording.
class World {
 public:
  World(WorldConfig config, ControllerSpec controller, Perturbations perturbations = {});

  StepEvents step();

  std::size_t time() const { return t_; }
  const WorldConfig& config() const { return config_; }
  const Rect& arena() const { return arena_; }
  const Rect& nest() const { return nest_; }
  const Rect& source() const { return source_; }
  std::span<const Robot> robots() const { return robots_; }
  std::span<const Block> blocks() const { return blocks_; }
  std::span<const Rect> clusters() const { return clusters_; }
  const Controller& controller(std::size_t robot) const { return *controllers_[robot]; }
  const RunStats& stats() const { return stats_; }
  std::size_t count_blocks(BlockState state) const;
  std::size_t tasked_count() const;

  /// Test hooks for constructing exact scenes.
  void place_robot(std::size_t robot, Vec2 position, double heading);
  void place_block(BlockId block, Vec2 position);

  /// Per-step trace "t,robot,x,y,mode"; nullptr disables it.
  void set_trace(std::ostream* out);

 private:
  void place_initial_blocks();
  Vec2 sample_block_position(std::size_t cluster);
  Vec2 sample_outside_nest(const Rect& region, RandomStream& rng);
  Vec2 nest_edge_point();
  Sensed sense(const Robot& robot);
  void apply_population_events();
  void move_blocks();
  void release_block(Robot& robot);
  void deposit(Block& block);

  WorldConfig config_;
  ControllerSpec controller_spec_;
  Perturbations perturbations_;
  Rect arena_;
  Rect nest_;
  Rect source_;
  std::vector<Rect> clusters_;
  NoiseScales noise_scales_;

  std::vector<Robot> robots_;
  std::vector<Block> blocks_;
  std::vector<std::unique_ptr<Controller>> controllers_;
  std::vector<RandomStream> controller_rngs_;

  RandomStream placement_rng_;
  RandomStream noise_rng_;
  RandomStream population_rng_;
  RandomStream motion_rng_;

  std::size_t t_ = 0;
  RunStats stats_;
  std::ostream* trace_ = nullptr;
};

/// Resolved arena for a config: fixed in variable-density mode, area
/// n_robots / density (aspect ratio kept) in constant-density mode.
Rect resolve_arena(const WorldConfig& config);

/// Cluster sizes for a power-law layout: K draws from P(s) ~ s^-exponent on
/// [1, n_blocks], rescaled by largest remainder to sum to n_blocks, each >= 1.
std::vector<std::size_t> power_law_cluster_sizes(std::size_t n_blocks, const PowerLawParams& params,
                                                 RandomStream& rng);

struct RunResult {
  CurveBundle bundle;
  RunStats stats;
};

RunResult simulate(const WorldConfig& config, const ControllerSpec& controller,
                   const Perturbations& perturbations = {}, std::ostream* trace = nullptr);

/// Runs config.duration steps and aggregates per-interval curves.
CurveBundle run(const WorldConfig& config, const ControllerSpec& controller,
                const Perturbations& perturbations = {});

}  // namespace swarmetrics::sim
