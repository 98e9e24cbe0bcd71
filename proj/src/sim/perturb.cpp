#include "swarmetrics/sim/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swarmetrics::sim {

double throttle_factor(const VarianceProfile& profile, std::size_t t) {
  const double v = std::clamp(profile.deviation.value_at(static_cast<double>(t)), 0.0, 1.0);
  return 1.0 - v;
}

bool throttle_applies(DeviationTarget target, bool carrying) {
  return target == DeviationTarget::AllSpeed || carrying;
}

NoiseChannel parse_noise_channel(const std::string& name) {
  if (name == "position_sense") return NoiseChannel::PositionSense;
  if (name == "bearing_sense") return NoiseChannel::BearingSense;
  if (name == "block_detect") return NoiseChannel::BlockDetect;
  if (name == "speed_actuation") return NoiseChannel::SpeedActuation;
  if (name == "turn_actuation") return NoiseChannel::TurnActuation;
  throw std::invalid_argument("unknown noise channel '" + name + "'");
}

std::string to_string(NoiseChannel channel) {
  switch (channel) {
    case NoiseChannel::PositionSense: return "position_sense";
    case NoiseChannel::BearingSense: return "bearing_sense";
    case NoiseChannel::BlockDetect: return "block_detect";
    case NoiseChannel::SpeedActuation: return "speed_actuation";
    case NoiseChannel::TurnActuation: return "turn_actuation";
  }
  return "?";
}

void NoiseProfile::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("noise sigma must be >= 0");
  if ((channels & ~kAllNoiseChannels) != 0) throw std::invalid_argument("unknown noise channel bits");
}

double NoiseScales::of(NoiseChannel c) const {
  switch (c) {
    case NoiseChannel::PositionSense: return position;
    case NoiseChannel::BearingSense: return bearing;
    case NoiseChannel::BlockDetect: return block_detect;
    case NoiseChannel::SpeedActuation: return speed;
    case NoiseChannel::TurnActuation: return turn;
  }
  return 0.0;
}

double perturb(double value, NoiseChannel channel, const NoiseProfile& noise,
               const NoiseScales& scales, RandomStream& rng) {
  if (!noise.enabled(channel)) return value;
  return value + rng.normal(0.0, noise.sigma * scales.of(channel));
}

double perturb_angle(double angle, NoiseChannel channel, const NoiseProfile& noise,
                     const NoiseScales& scales, RandomStream& rng) {
  if (!noise.enabled(channel)) return angle;
  return wrap_angle(perturb(angle, channel, noise, scales, rng));
}

Vec2 perturb_position(Vec2 p, NoiseChannel channel, const NoiseProfile& noise,
                      const NoiseScales& scales, const Rect& arena, RandomStream& rng) {
  if (!noise.enabled(channel)) return p;
  const double x = perturb(p.x, channel, noise, scales, rng);
  const double y = perturb(p.y, channel, noise, scales, rng);
  return arena.clamp({x, y});
}

void PopulationProfile::validate() const {
  rates.validate();
  for (double r : {rates.lambda_d, rates.lambda_bd, rates.mu_b, rates.mu_bd}) {
    if (r > 1.0) throw std::invalid_argument("per-step population rates must be <= 1");
  }
  if (rates.lambda_d + rates.lambda_bd > 1.0)
    throw std::invalid_argument("lambda_d + lambda_bd must be <= 1");
  if (initial_tasked > max_population)
    throw std::invalid_argument("initial tasked size exceeds max population");
}

std::vector<PopulationEvent> population_events(const PopulationProfile& profile,
                                               std::span<const RobotStatus> statuses,
                                               RandomStream& rng) {
  std::vector<PopulationEvent> events(statuses.size(), PopulationEvent::None);
  if (!profile.active()) return events;
  const auto& r = profile.rates;
  for (std::size_t i = 0; i < statuses.size(); ++i) {
    // One draw per robot regardless of status keeps the stream aligned.
    const double u = rng.uniform();
    switch (statuses[i]) {
      case RobotStatus::Tasked:
        if (u < r.lambda_d) {
          events[i] = PopulationEvent::RemovePermanent;
        } else if (u < r.lambda_d + r.lambda_bd) {
          events[i] = PopulationEvent::RemoveTemporary;
        }
        break;
      case RobotStatus::Absent:
        if (u < r.mu_bd) events[i] = PopulationEvent::Return;
        break;
      case RobotStatus::Reserve:
        if (u < r.mu_b) events[i] = PopulationEvent::Add;
        break;
      case RobotStatus::Removed:
        break;
    }
  }
  return events;
}

}  // namespace swarmetrics::sim
