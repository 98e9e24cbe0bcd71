#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmetrics/curves.hpp"
#include "swarmetrics/dtw.hpp"
#include "swarmetrics/flexibility.hpp"
#include "swarmetrics/scalability.hpp"
#include "swarmetrics/sim/world.hpp"

namespace swarmetrics {

/// Invalid experiment plan.
class PlanError : public std::invalid_argument {
 public:
  explicit PlanError(const std::string& what) : std::invalid_argument(what) {}
};

enum class SweepAxis { NoiseSigma, ThrottleAmplitude, PopulationRates, PRw };
SweepAxis parse_sweep_axis(const std::string& name);
std::string to_string(SweepAxis axis);

enum class Metric {
  SpatialSelfOrg,
  TaskSelfOrg,
  Scalability,
  Reactivity,
  Adaptability,
  SaRobustness,
  PdRobustness,
  Availability,
};
Metric parse_metric(const std::string& name);
std::string to_string(Metric metric);
std::vector<Metric> all_metrics();

/// One swept axis. For population_rates the value is lambda_bd; the other
/// rates come from the scenario's population profile.
struct Sweep {
  SweepAxis axis = SweepAxis::NoiseSigma;
  std::vector<double> values;
};

struct MetricOptions {
  DtwConfig dtw;
  ProportionalityConvention convention = ProportionalityConvention::SpeedCap;
  ScalabilityOptions scalability;
  /// N_min values for the availability table; empty means 1..N.
  std::vector<std::size_t> n_min;
};

struct ExperimentPlan {
  sim::WorldConfig scenario;        // n_robots and seed are set per run
  sim::Perturbations perturbations; // template condition
  std::vector<sim::ControllerSpec> controllers;
  std::vector<std::size_t> swarm_sizes;
  std::vector<Sweep> sweeps;
  std::size_t n_runs = 24;
  std::uint64_t base_seed = 1;
  std::vector<Metric> metrics;  // empty means all
  MetricOptions options;

  bool requests(Metric m) const;
  /// Throws PlanError. Returns warnings, e.g. for duplicate sweep values.
  std::vector<std::string> validate() const;
};

/// A perturbation condition a cell is run under.
struct Condition {
  std::string label;
  std::optional<SweepAxis> axis;  // unset for baselines and the template
  double value = 0.0;
  bool is_baseline = false;
  std::optional<std::size_t> baseline;  // index of the ideal condition for this axis
  double p_rw = 0.0;
  sim::Perturbations perturbations;
};

/// Fully resolved, self-contained simulation run.
struct RunSpec {
  std::size_t controller = 0;  // index into plan.controllers
  std::size_t condition = 0;   // index into Expansion::conditions
  std::size_t swarm_size = 0;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  sim::WorldConfig config;
  sim::ControllerSpec controller_spec;
  sim::Perturbations perturbations;

  std::string label() const;
};

struct Expansion {
  std::vector<Condition> conditions;
  std::vector<RunSpec> specs;
  std::vector<std::string> warnings;
};

/// Canonical text form of a controller and its parameters.
std::string controller_key(const sim::ControllerSpec& spec);

/// Seed for run `run` of a cell. Independent of sweep values so every
/// condition of a cell sees the same placement and controller draws.
std::uint64_t run_seed(std::uint64_t base_seed, const sim::ControllerSpec& controller,
                       std::size_t swarm_size, std::size_t run);

/// Controllers x sizes x conditions x runs, plus per-axis ideal baselines for
/// metrics that compare against P_ideal. Throws PlanError.
Expansion expand(const ExperimentPlan& plan);

struct RunOutcome {
  std::optional<CurveBundle> bundle;
  std::string error;  // set when the run threw

  bool ok() const { return bundle.has_value(); }
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every spec on up to `workers` threads. Outcomes are indexed like
/// `specs`; a throwing run is recorded and the batch continues.
std::vector<RunOutcome> execute(std::span<const RunSpec> specs, std::size_t workers,
                                const ProgressFn& progress = {});

struct MetricRow {
  std::string metric;
  std::string controller;  // "-" when controller independent
  std::string condition;
  std::string axis;        // empty outside sweeps
  std::optional<double> x; // sweep value, or N_min for availability
  std::size_t n1 = 0;
  std::size_t n2 = 0;      // 0 for single-size metrics
  std::optional<double> value;  // metric on run-averaged curves
  SampleSummary runs;           // metric per paired run
  bool applicable = true;
  std::string note;

  /// Identifies the row independently of its values.
  std::string key() const;
};

struct MetricReport {
  std::vector<MetricRow> rows;
  std::vector<std::string> failures;  // "<spec label>: <error>"

  /// Canonical row order.
  void sort();
  std::string csv() const;
  /// FNV-1a of csv() in hex.
  std::string hash() const;
  /// Plot-ready rows for one metric: X = sweep value, Y = value with CI columns.
  std::string plot_csv(const std::string& metric) const;
  std::vector<std::string> metric_names() const;
};

/// Every requested metric for every applicable cell; cells that cannot be
/// computed get an inapplicable row with the reason.
MetricReport compute_suite(const ExperimentPlan& plan, const Expansion& expansion,
                           std::span<const RunOutcome> outcomes);

/// Union of two reports. Identical rows collapse; conflicting values throw.
MetricReport merge_reports(const MetricReport& a, const MetricReport& b);

/// Writes metrics.csv, one metric_<name>.csv per metric and the run-averaged
/// curves under curves/, each atomically.
void write_report(const std::filesystem::path& dir, const MetricReport& report,
                  const ExperimentPlan& plan, const Expansion& expansion,
                  std::span<const RunOutcome> outcomes);

}  // namespace swarmetrics
