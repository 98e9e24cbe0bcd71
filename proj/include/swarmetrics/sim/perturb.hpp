#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "swarmetrics/flexibility.hpp"
#include "swarmetrics/robustness.hpp"
#include "swarmetrics/sim/geometry.hpp"
#include "swarmetrics/sim/rng.hpp"

namespace swarmetrics::sim {

/// Multiplicative cap on robot speed at timestep t: 1 - V_dev(t).
double throttle_factor(const VarianceProfile& profile, std::size_t t);
bool throttle_applies(DeviationTarget target, bool carrying);

enum class NoiseChannel : std::uint32_t {
  PositionSense = 1u << 0,
  BearingSense = 1u << 1,
  BlockDetect = 1u << 2,
  SpeedActuation = 1u << 3,
  TurnActuation = 1u << 4,
};
constexpr std::uint32_t kAllNoiseChannels = 0x1f;

NoiseChannel parse_noise_channel(const std::string& name);
std::string to_string(NoiseChannel channel);

/// Zero-mean Gaussian noise, sigma given as a fraction of each channel's full scale.
struct NoiseProfile {
  double sigma = 0.0;
  std::uint32_t channels = kAllNoiseChannels;

  bool enabled(NoiseChannel c) const {
    return sigma > 0.0 && (channels & static_cast<std::uint32_t>(c)) != 0;
  }
  void validate() const;
};

/// Full-scale reference per channel: position = arena diagonal, bearing = pi,
/// block_detect = sense radius, speed / turn = configured maxima.
struct NoiseScales {
  double position = 1.0;
  double bearing = 3.141592653589793;
  double block_detect = 1.0;
  double speed = 1.0;
  double turn = 1.0;

  double of(NoiseChannel c) const;
};

/// value + N(0, sigma * full_scale). Returns the input unchanged when the
/// channel is disabled; no draw is consumed in that case.
double perturb(double value, NoiseChannel channel, const NoiseProfile& noise,
               const NoiseScales& scales, RandomStream& rng);
/// As perturb, then wrapped into (-pi, pi].
double perturb_angle(double angle, NoiseChannel channel, const NoiseProfile& noise,
                     const NoiseScales& scales, RandomStream& rng);
/// Independent noise per axis, then clamped to the arena.
Vec2 perturb_position(Vec2 p, NoiseChannel channel, const NoiseProfile& noise,
                      const NoiseScales& scales, const Rect& arena, RandomStream& rng);

enum class RobotStatus { Tasked, Reserve, Absent, Removed };

struct PopulationProfile {
  QueueRates rates;
  std::size_t max_population = 0;
  std::size_t initial_tasked = 0;  // 0 means all of max_population

  bool active() const { return !rates.all_zero(); }
  void validate() const;
};

enum class PopulationEvent { None, RemovePermanent, RemoveTemporary, Return, Add };

/// One Bernoulli trial per robot per step, so each robot sees at most one event:
/// tasked robots leave permanently w.p. lambda_d or temporarily w.p. lambda_bd,
/// absent robots return w.p. mu_bd, reserve robots join w.p. mu_b.
/// Permanently removed robots never return.
std::vector<PopulationEvent> population_events(const PopulationProfile& profile,
                                               std::span<const RobotStatus> statuses,
                                               RandomStream& rng);

}  // namespace swarmetrics::sim
