#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarmetrics {

/// Raised when a curve file cannot be parsed. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Labels shared by every curve of one run.
struct CurveInfo {
  std::size_t interval_len = 1000;  // simulator timesteps per curve point
  std::size_t swarm_size = 1;
  std::string controller;
  std::string condition;

  bool operator==(const CurveInfo&) const = default;
};

/// Performance P(N, kappa, t) per measurement interval. Values are >= 0.
class PerformanceCurve {
 public:
  PerformanceCurve() = default;
  PerformanceCurve(std::vector<double> values, CurveInfo info);

  std::span<const double> values() const { return values_; }
  const CurveInfo& info() const { return info_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  bool operator==(const PerformanceCurve&) const = default;

 private:
  std::vector<double> values_;
  CurveInfo info_;
};

/// Fraction of robot-time lost to inter-robot interference per interval, in [0,1].
class InterferenceCurve {
 public:
  InterferenceCurve() = default;
  InterferenceCurve(std::vector<double> values, CurveInfo info);

  std::span<const double> values() const { return values_; }
  const CurveInfo& info() const { return info_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  bool operator==(const InterferenceCurve&) const = default;

 private:
  std::vector<double> values_;
  CurveInfo info_;
};

/// Tasked swarm size N_S(t) per interval. Integral for a single run; the
/// run-average produced by mean_over_runs is real-valued.
class PopulationCurve {
 public:
  PopulationCurve() = default;
  PopulationCurve(std::vector<double> values, std::size_t interval_len);

  std::span<const double> values() const { return values_; }
  std::size_t interval_len() const { return interval_len_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  bool operator==(const PopulationCurve&) const = default;

 private:
  std::vector<double> values_;
  std::size_t interval_len_ = 1000;
};

struct CurveBundle {
  PerformanceCurve performance;
  InterferenceCurve interference;
  PopulationCurve population;
  std::uint64_t run_seed = 0;

  /// Throws std::invalid_argument unless all members share length and interval_len.
  void validate() const;
  std::size_t size() const { return performance.size(); }

  bool operator==(const CurveBundle&) const = default;
};

/// Throws std::invalid_argument when two curves cannot be compared pointwise.
void require_compatible(const PerformanceCurve& a, const PerformanceCurve& b);

/// Sums per-timestep event counts into per-interval rates (events / interval_len).
/// A trailing partial interval is dropped.
PerformanceCurve aggregate_events(std::span<const double> events, std::size_t interval_len,
                                  CurveInfo info = {});

/// Maps smaller-is-better measures onto the larger-is-better convention.
PerformanceCurve reciprocal_transform(const PerformanceCurve& curve, double epsilon = 1e-9);

struct RunAverage {
  CurveBundle mean;
  // 95% normal-approximation half-widths, 1.96 * s / sqrt(n)
  std::vector<double> performance_halfwidth;
  std::vector<double> interference_halfwidth;
  std::vector<double> population_halfwidth;
};

RunAverage mean_over_runs(std::span<const CurveBundle> runs);

/// Mean and 95% half-width of a sample (n >= 2).
struct SampleSummary {
  double mean = 0.0;
  double halfwidth = 0.0;
  std::size_t n = 0;
};
SampleSummary summarize(std::span<const double> sample);

// CSV: t,interval_len,swarm_size,controller,condition,perf,interference,tasked_size
std::string format_curves(const CurveBundle& bundle);
CurveBundle parse_curves(const std::string& text);
void write_curves(const CurveBundle& bundle, const std::filesystem::path& path);
CurveBundle read_curves(const std::filesystem::path& path);

}  // namespace swarmetrics
