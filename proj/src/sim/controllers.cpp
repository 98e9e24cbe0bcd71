#include "swarmetrics/sim/controllers.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

#include "swarmetrics/io_util.hpp"

namespace swarmetrics::sim {

void CrwParams::validate() const {
  if (!(turn_stddev > 0.0)) throw std::invalid_argument("crw turn_stddev must be > 0");
}

void DpoParams::validate() const {
  if (!(decay_rho > 0.0 && decay_rho < 1.0))
    throw std::invalid_argument("dpo decay_rho must lie in (0,1)");
  if (!(sense_radius > 0.0)) throw std::invalid_argument("dpo sense_radius must be > 0");
  if (!(relevance_floor >= 0.0 && relevance_floor < 1.0))
    throw std::invalid_argument("dpo relevance_floor must lie in [0,1)");
  exploration.validate();
}

void DpoMemory::decay(double rho) {
  for (auto& [id, e] : tracked) e.density *= rho;
}

void DpoMemory::refresh(BlockId id, Vec2 position) { tracked[id] = Entry{position, 1.0}; }

void DpoMemory::prune(double floor) {
  std::erase_if(tracked, [floor](const auto& kv) { return kv.second.density < floor; });
}

double relevance(double density, double distance) { return density / (1.0 + distance); }

namespace {

Action explore(const Sensed& sensed, const CrwParams& params, RandomStream& rng) {
  Action a;
  a.turn = rng.normal(0.0, params.turn_stddev);
  const SeenBlock* nearest = nullptr;
  for (const auto& b : sensed.blocks) {
    if (b.in_pickup_range && (!nearest || b.distance < nearest->distance)) nearest = &b;
  }
  if (nearest) {
    a.pickup = nearest->id;
    a.speed = 0.0;
  }
  return a;
}

Action home(const Proprioception& self, const Sensed& sensed) {
  Action a;
  a.turn = wrap_angle(sensed.beacon_bearing - self.heading);
  if (sensed.in_nest) {
    a.drop = true;
    a.speed = 0.0;
  }
  return a;
}

}  // namespace

Action crw_decide(const Proprioception& self, const Sensed& sensed, const CrwParams& params,
                  RandomStream& rng) {
  if (self.carrying) return home(self, sensed);
  return explore(sensed, params, rng);
}

Action dpo_decide(const Proprioception& self, const Sensed& sensed, DpoMemory& memory,
                  const DpoParams& params, RandomStream& rng) {
  memory.decay(params.decay_rho);
  for (const auto& b : sensed.blocks) {
    if (b.distance <= params.sense_radius) memory.refresh(b.id, b.world);
  }
  memory.prune(params.relevance_floor);

  if (self.carrying) return home(self, sensed);

  for (const auto& b : sensed.blocks) {
    if (b.in_pickup_range) {
      Action a = explore(sensed, params.exploration, rng);
      if (a.pickup) memory.forget(*a.pickup);
      return a;
    }
  }

  // Pick the most relevant remembered block. Ties go to the lower id.
  while (!memory.empty()) {
    BlockId best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (const auto& [id, e] : memory.tracked) {
      const double score = relevance(e.density, distance(e.position, sensed.position));
      if (score > best_score) {
        best_score = score;
        best = id;
      }
    }

    const SeenBlock* visible = nullptr;
    for (const auto& b : sensed.blocks)
      if (b.id == best) visible = &b;

    Vec2 offset;
    if (visible) {
      offset = visible->relative;
    } else {
      offset = memory.tracked.at(best).position - sensed.position;
      // Arrived where it was remembered and it is gone.
      if (offset.norm() < params.sense_radius * 0.5) {
        memory.forget(best);
        continue;
      }
    }
    Action a;
    a.turn = wrap_angle(offset.angle() - self.heading);
    return a;
  }
  return explore(sensed, params.exploration, rng);
}

std::string ControllerSpec::id() const { return kind == ControllerKind::Crw ? "crw" : "dpo"; }

void ControllerSpec::validate() const {
  if (kind == ControllerKind::Crw) crw.validate();
  else dpo.validate();
}

ControllerKind parse_controller_kind(const std::string& name) {
  if (name == "crw" || name == "CRW") return ControllerKind::Crw;
  if (name == "dpo" || name == "DPO") return ControllerKind::Dpo;
  throw std::invalid_argument("unknown controller '" + name + "' (expected crw or dpo)");
}

namespace {

class CrwController final : public Controller {
 public:
  explicit CrwController(CrwParams p) : params_(p) {}
  Action decide(const Proprioception& self, const Sensed& sensed, RandomStream& rng) override {
    return crw_decide(self, sensed, params_, rng);
  }
  void reset() override {}
  std::size_t memory_size() const override { return 0; }
  std::string serialize_memory() const override { return {}; }

 private:
  CrwParams params_;
};

class DpoController final : public Controller {
 public:
  explicit DpoController(DpoParams p) : params_(p) {}
  Action decide(const Proprioception& self, const Sensed& sensed, RandomStream& rng) override {
    return dpo_decide(self, sensed, memory_, params_, rng);
  }
  void reset() override { memory_.clear(); }
  std::size_t memory_size() const override { return memory_.size(); }
  std::string serialize_memory() const override {
    std::ostringstream out;
    for (const auto& [id, e] : memory_.tracked) {
      out << id << ':' << format_double(e.position.x) << ',' << format_double(e.position.y) << ','
          << format_double(e.density) << ';';
    }
    return out.str();
  }

 private:
  DpoParams params_;
  DpoMemory memory_;
};

}  // namespace

std::unique_ptr<Controller> make_controller(const ControllerSpec& spec) {
  spec.validate();
  if (spec.kind == ControllerKind::Crw) return std::make_unique<CrwController>(spec.crw);
  return std::make_unique<DpoController>(spec.dpo);
}

}  // namespace swarmetrics::sim
