#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "swarmetrics/dtw.hpp"

namespace swarmetrics {

enum class WaveformKind { Constant, Square, Sine };

/// A non-negative adversity waveform V_dev(t), t in simulator timesteps.
///
///  - Constant: amplitude everywhere.
///  - Square:   amplitude on the open first half of each period, 0 otherwise.
///  - Sine:     amplitude * (1 - cos(2*pi*(t/period + phase))) / 2.
///
/// Square and sine start at zero adversity at t = 0 when phase = 0.
struct Waveform {
  WaveformKind kind = WaveformKind::Constant;
  double amplitude = 0.0;  // throttle fraction, [0,1)
  double period = 5000.0;  // timesteps, >= 2
  double phase = 0.0;      // fraction of a period

  double value_at(double t) const;
  /// Mean over the integer timesteps [begin, begin + count).
  double mean_over(std::size_t begin, std::size_t count) const;
  void validate() const;
};

enum class DeviationTarget { CarrySpeed, AllSpeed };

/// How the ideal-reactivity curve scales P_ideal under a deviation.
enum class ProportionalityConvention {
  /// c'_t = I/(V + I): a speed cap slows the swarm proportionally.
  SpeedCap,
  /// c_t = (V + I)/I as written for a generic signed deviation.
  Literal,
};

struct VarianceProfile {
  double ideal_level = 1.0;  // I_ec, un-throttled maximum speed (normalised)
  Waveform deviation;        // V_dev
  DeviationTarget target = DeviationTarget::CarrySpeed;

  void validate() const;
};

WaveformKind parse_waveform_kind(const std::string& name);
std::string to_string(WaveformKind kind);
DeviationTarget parse_deviation_target(const std::string& name);
std::string to_string(DeviationTarget target);

/// c_t = (V_dev + I_ec) / I_ec. Throws std::domain_error when I_ec = 0.
double proportionality(double deviation, double ideal);

/// Per-interval proportionality factors for a curve of n_intervals points,
/// using the mean deviation over each interval.
std::vector<double> proportionality_curve(const VarianceProfile& profile, std::size_t n_intervals,
                                          std::size_t interval_len,
                                          ProportionalityConvention convention =
                                              ProportionalityConvention::SpeedCap);

/// Pointwise c_t * P_ideal(t).
std::vector<double> ideal_reactivity_curve(std::span<const double> perf_ideal,
                                           std::span<const double> factors);

struct FlexibilityOptions {
  DtwConfig dtw;
  ProportionalityConvention convention = ProportionalityConvention::SpeedCap;
};

/// DTW between the ideal-reactivity curve and the observed curve; 0 is optimal.
double reactivity(std::span<const double> perf_ideal, std::span<const double> perf_actual,
                  const VarianceProfile& profile, std::size_t interval_len,
                  const FlexibilityOptions& opts = {});

/// DTW between the ideal curve and the observed curve; 0 is optimal.
double adaptability(std::span<const double> perf_ideal, std::span<const double> perf_actual,
                    const DtwConfig& dtw = {});

}  // namespace swarmetrics
