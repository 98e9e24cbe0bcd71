#include "swarmetrics/flexibility.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace swarmetrics {

double Waveform::value_at(double t) const {
  switch (kind) {
    case WaveformKind::Constant:
      return amplitude;
    case WaveformKind::Square: {
      double u = t / period + phase;
      u -= std::floor(u);
      return (u > 0.0 && u < 0.5) ? amplitude : 0.0;
    }
    case WaveformKind::Sine:
      return amplitude * (1.0 - std::cos(2.0 * std::numbers::pi * (t / period + phase))) / 2.0;
  }
  return 0.0;
}

double Waveform::mean_over(std::size_t begin, std::size_t count) const {
  if (count == 0) return value_at(static_cast<double>(begin));
  if (kind == WaveformKind::Constant) return amplitude;
  double sum = 0.0;
  for (std::size_t k = 0; k < count; ++k) sum += value_at(static_cast<double>(begin + k));
  return sum / static_cast<double>(count);
}

void Waveform::validate() const {
  if (!(amplitude >= 0.0 && amplitude < 1.0))
    throw std::invalid_argument("waveform amplitude must lie in [0,1)");
  if (kind != WaveformKind::Constant && !(period >= 2.0))
    throw std::invalid_argument("waveform period must be >= 2 timesteps");
  if (!std::isfinite(phase)) throw std::invalid_argument("waveform phase must be finite");
}

void VarianceProfile::validate() const {
  if (!(ideal_level > 0.0)) throw std::invalid_argument("ideal level I_ec must be > 0");
  deviation.validate();
}

WaveformKind parse_waveform_kind(const std::string& name) {
  if (name == "constant") return WaveformKind::Constant;
  if (name == "square") return WaveformKind::Square;
  if (name == "sine") return WaveformKind::Sine;
  throw std::invalid_argument("unknown waveform kind '" + name + "'");
}

std::string to_string(WaveformKind kind) {
  switch (kind) {
    case WaveformKind::Constant: return "constant";
    case WaveformKind::Square: return "square";
    case WaveformKind::Sine: return "sine";
  }
  return "?";
}

DeviationTarget parse_deviation_target(const std::string& name) {
  if (name == "carry_speed") return DeviationTarget::CarrySpeed;
  if (name == "all_speed") return DeviationTarget::AllSpeed;
  throw std::invalid_argument("unknown deviation target '" + name + "'");
}

std::string to_string(DeviationTarget target) {
  return target == DeviationTarget::CarrySpeed ? "carry_speed" : "all_speed";
}

double proportionality(double deviation, double ideal) {
  if (ideal == 0.0) throw std::domain_error("undefined proportionality at t: I_ec(t) = 0");
  return (deviation + ideal) / ideal;
}

std::vector<double> proportionality_curve(const VarianceProfile& profile, std::size_t n_intervals,
                                          std::size_t interval_len,
                                          ProportionalityConvention convention) {
  if (interval_len == 0) throw std::invalid_argument("interval_len must be >= 1");
  std::vector<double> c(n_intervals);
  for (std::size_t i = 0; i < n_intervals; ++i) {
    const double v = profile.deviation.mean_over(i * interval_len, interval_len);
    const double lit = proportionality(v, profile.ideal_level);
    if (convention == ProportionalityConvention::Literal) {
      c[i] = lit;
    } else {
      if (lit == 0.0) throw std::domain_error("undefined proportionality at t: V_dev = -I_ec");
      c[i] = 1.0 / lit;
    }
  }
  return c;
}

std::vector<double> ideal_reactivity_curve(std::span<const double> perf_ideal,
                                           std::span<const double> factors) {
  if (perf_ideal.size() != factors.size())
    throw std::invalid_argument("ideal_reactivity_curve: length mismatch");
  std::vector<double> out(perf_ideal.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = factors[i] * perf_ideal[i];
  return out;
}

double reactivity(std::span<const double> perf_ideal, std::span<const double> perf_actual,
                  const VarianceProfile& profile, std::size_t interval_len,
                  const FlexibilityOptions& opts) {
  if (perf_ideal.size() != perf_actual.size())
    throw std::invalid_argument("reactivity: curve length mismatch");
  auto c = proportionality_curve(profile, perf_ideal.size(), interval_len, opts.convention);
  auto target = ideal_reactivity_curve(perf_ideal, c);
  return dtw_distance(target, perf_actual, opts.dtw);
}

double adaptability(std::span<const double> perf_ideal, std::span<const double> perf_actual,
                    const DtwConfig& dtw) {
  if (perf_ideal.size() != perf_actual.size())
    throw std::invalid_argument("adaptability: curve length mismatch");
  return dtw_distance(perf_ideal, perf_actual, dtw);
}

}  // namespace swarmetrics
