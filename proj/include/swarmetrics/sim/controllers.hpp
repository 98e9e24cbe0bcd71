#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "swarmetrics/sim/geometry.hpp"
#include "swarmetrics/sim/rng.hpp"

namespace swarmetrics::sim {

using BlockId = std::size_t;

/// A free block as perceived by one robot this step.
struct SeenBlock {
  BlockId id = 0;
  Vec2 relative;      // perceived offset from the robot
  Vec2 world;         // perceived self position + relative
  double distance = 0.0;
  bool in_pickup_range = false;
};

struct Sensed {
  Vec2 position;              // perceived own position
  double beacon_bearing = 0;  // perceived world-frame bearing to the nest light
  bool in_nest = false;       // judged from the perceived position
  std::vector<SeenBlock> blocks;
};

/// What the robot knows about itself without sensing.
struct Proprioception {
  double heading = 0.0;
  bool carrying = false;
};

struct Action {
  double turn = 0.0;   // requested heading change, radians
  double speed = 1.0;  // fraction of max speed
  std::optional<BlockId> pickup;
  bool drop = false;

  bool operator==(const Action&) const = default;
};

struct CrwParams {
  double turn_stddev = 0.35;  // radians per step
  void validate() const;
};

struct DpoParams {
  double decay_rho = 0.999;  // per-step pheromone decay
  double sense_radius = 1.0;
  double relevance_floor = 0.05;
  CrwParams exploration;
  void validate() const;
};

/// Pheromone memory of blocks a DPO robot has seen.
struct DpoMemory {
  struct Entry {
    Vec2 position;
    double density = 0.0;
  };
  std::map<BlockId, Entry> tracked;

  void decay(double rho);
  void refresh(BlockId id, Vec2 position);
  void prune(double floor);
  void forget(BlockId id) { tracked.erase(id); }
  void clear() { tracked.clear(); }
  bool empty() const { return tracked.empty(); }
  std::size_t size() const { return tracked.size(); }
};

/// Relevance of a remembered block, density / (1 + distance).
double relevance(double density, double distance);

/// Correlated random walk with phototaxis homing. Reactive: no memory.
Action crw_decide(const Proprioception& self, const Sensed& sensed, const CrwParams& params,
                  RandomStream& rng);

/// Decaying-pheromone-object controller. Updates `memory` in place.
Action dpo_decide(const Proprioception& self, const Sensed& sensed, DpoMemory& memory,
                  const DpoParams& params, RandomStream& rng);

enum class ControllerKind { Crw, Dpo };

struct ControllerSpec {
  ControllerKind kind = ControllerKind::Crw;
  CrwParams crw;
  DpoParams dpo;

  std::string id() const;
  void validate() const;
};

ControllerKind parse_controller_kind(const std::string& name);

/// Per-robot controller instance. Owns the robot's controller memory.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual Action decide(const Proprioception& self, const Sensed& sensed, RandomStream& rng) = 0;
  /// Clears memory, e.g. when a robot rejoins the swarm.
  virtual void reset() = 0;
  virtual std::size_t memory_size() const = 0;
  /// Canonical text form of the memory; empty for memory-less controllers.
  virtual std::string serialize_memory() const = 0;
};

std::unique_ptr<Controller> make_controller(const ControllerSpec& spec);

}  // namespace swarmetrics::sim
