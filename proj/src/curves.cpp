#include "swarmetrics/curves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "swarmetrics/io_util.hpp"

namespace swarmetrics {

namespace {

constexpr const char* kHeader =
    "t,interval_len,swarm_size,controller,condition,perf,interference,tasked_size";
constexpr std::string_view kSeedPrefix = "#run_seed=";

void check_info(const CurveInfo& info) {
  if (info.interval_len == 0) throw std::invalid_argument("interval_len must be >= 1");
  if (info.swarm_size == 0) throw std::invalid_argument("swarm_size must be >= 1");
}

void check_label(const std::string& label) {
  if (label.find_first_of(",\"\r\n") != std::string::npos)
    throw std::invalid_argument("curve label may not contain ',', '\"' or newlines: " + label);
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

PerformanceCurve::PerformanceCurve(std::vector<double> values, CurveInfo info)
    : values_(std::move(values)), info_(std::move(info)) {
  check_info(info_);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i]))
      throw std::invalid_argument("performance value at interval " + std::to_string(i) +
                                  " must be finite and >= 0");
  }
}

InterferenceCurve::InterferenceCurve(std::vector<double> values, CurveInfo info)
    : values_(std::move(values)), info_(std::move(info)) {
  check_info(info_);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0 && values_[i] <= 1.0))
      throw std::invalid_argument("interference value at interval " + std::to_string(i) +
                                  " must lie in [0,1]");
  }
}

PopulationCurve::PopulationCurve(std::vector<double> values, std::size_t interval_len)
    : values_(std::move(values)), interval_len_(interval_len) {
  if (interval_len_ == 0) throw std::invalid_argument("interval_len must be >= 1");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i]))
      throw std::invalid_argument("tasked size at interval " + std::to_string(i) +
                                  " must be finite and >= 0");
  }
}

void CurveBundle::validate() const {
  const auto n = performance.size();
  const auto len = performance.info().interval_len;
  if (interference.size() != n || population.size() != n)
    throw std::invalid_argument("curve bundle members differ in length");
  if (interference.info().interval_len != len || population.interval_len() != len)
    throw std::invalid_argument("curve bundle members differ in interval_len");
}

void require_compatible(const PerformanceCurve& a, const PerformanceCurve& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("curves differ in length (" + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  if (a.info().interval_len != b.info().interval_len)
    throw std::invalid_argument("curves differ in interval_len");
}

PerformanceCurve aggregate_events(std::span<const double> events, std::size_t interval_len,
                                  CurveInfo info) {
  if (events.empty()) throw std::invalid_argument("empty event stream");
  if (interval_len == 0) throw std::invalid_argument("interval_len must be >= 1");
  info.interval_len = interval_len;
  const std::size_t n = events.size() / interval_len;
  std::vector<double> values(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < interval_len; ++k) sum += events[i * interval_len + k];
    values[i] = sum / static_cast<double>(interval_len);
  }
  return PerformanceCurve(std::move(values), std::move(info));
}

PerformanceCurve reciprocal_transform(const PerformanceCurve& curve, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  std::vector<double> out;
  out.reserve(curve.size());
  for (double v : curve.values()) out.push_back(1.0 / std::max(v, epsilon));
  return PerformanceCurve(std::move(out), curve.info());
}

SampleSummary summarize(std::span<const double> sample) {
  SampleSummary s;
  s.n = sample.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : sample) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n < 2) return s;
  double ss = 0.0;
  for (double v : sample) ss += (v - s.mean) * (v - s.mean);
  const double sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  s.halfwidth = 1.96 * sd / std::sqrt(static_cast<double>(s.n));
  return s;
}

RunAverage mean_over_runs(std::span<const CurveBundle> runs) {
  if (runs.size() < 2) throw std::invalid_argument("mean_over_runs needs at least 2 runs");
  const auto& first = runs.front();
  first.validate();
  for (const auto& r : runs) {
    r.validate();
    if (r.size() != first.size() ||
        r.performance.info().interval_len != first.performance.info().interval_len)
      throw std::invalid_argument("run bundles differ in shape");
  }

  const std::size_t n = first.size();
  std::vector<double> perf(n), intf(n), pop(n);
  RunAverage out;
  out.performance_halfwidth.resize(n);
  out.interference_halfwidth.resize(n);
  out.population_halfwidth.resize(n);
  std::vector<double> column(runs.size());

  auto reduce = [&](auto getter, std::vector<double>& mean, std::vector<double>& hw) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t r = 0; r < runs.size(); ++r) column[r] = getter(runs[r], i);
      auto s = summarize(column);
      mean[i] = s.mean;
      hw[i] = s.halfwidth;
    }
  };
  reduce([](const CurveBundle& b, std::size_t i) { return b.performance[i]; }, perf,
         out.performance_halfwidth);
  reduce([](const CurveBundle& b, std::size_t i) { return b.interference[i]; }, intf,
         out.interference_halfwidth);
  reduce([](const CurveBundle& b, std::size_t i) { return b.population[i]; }, pop,
         out.population_halfwidth);

  // Rounding can push a mean of values in [0,1] a hair outside the range.
  for (auto& v : intf) v = std::clamp(v, 0.0, 1.0);

  out.mean.performance = PerformanceCurve(std::move(perf), first.performance.info());
  out.mean.interference = InterferenceCurve(std::move(intf), first.interference.info());
  out.mean.population = PopulationCurve(std::move(pop), first.population.interval_len());
  out.mean.run_seed = first.run_seed;
  return out;
}

std::string format_curves(const CurveBundle& bundle) {
  bundle.validate();
  const auto& info = bundle.performance.info();
  check_label(info.controller);
  check_label(info.condition);
  std::ostringstream out;
  out << kSeedPrefix << bundle.run_seed << '\n' << kHeader << '\n';
  for (std::size_t i = 0; i < bundle.size(); ++i) {
    out << i << ',' << info.interval_len << ',' << info.swarm_size << ',' << info.controller << ','
        << info.condition << ',' << format_double(bundle.performance[i]) << ','
        << format_double(bundle.interference[i]) << ',' << format_double(bundle.population[i])
        << '\n';
  }
  return out.str();
}

CurveBundle parse_curves(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::uint64_t seed = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line()) throw ParseError(1, "empty file");
  if (line.starts_with(kSeedPrefix)) {
    auto s = parse_uint(std::string_view(line).substr(kSeedPrefix.size()));
    if (!s) throw ParseError(lineno, "malformed run_seed comment");
    seed = *s;
    if (!next_line()) throw ParseError(lineno + 1, "missing header");
  }
  if (line != kHeader) throw ParseError(lineno, "malformed header, expected '" + std::string(kHeader) + "'");

  CurveInfo info;
  bool have_info = false;
  std::vector<double> perf, intf, pop;
  while (next_line()) {
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != 8)
      throw ParseError(lineno, "expected 8 columns, found " + std::to_string(cells.size()));
    auto t = parse_uint(cells[0]);
    if (!t) throw ParseError(lineno, "non-numeric t '" + std::string(cells[0]) + "'");
    if (*t != perf.size())
      throw ParseError(lineno, "t must count up from 0, found " + std::string(cells[0]));
    auto len = parse_uint(cells[1]);
    auto size = parse_uint(cells[2]);
    if (!len || *len == 0) throw ParseError(lineno, "interval_len must be a positive integer");
    if (!size || *size == 0) throw ParseError(lineno, "swarm_size must be a positive integer");
    CurveInfo row{*len, *size, std::string(cells[3]), std::string(cells[4])};
    if (!have_info) {
      info = row;
      have_info = true;
    } else if (!(row == info)) {
      throw ParseError(lineno, "interval_len/swarm_size/controller/condition change mid-file");
    }
    auto p = parse_double(cells[5]);
    auto f = parse_double(cells[6]);
    auto n = parse_double(cells[7]);
    if (!p) throw ParseError(lineno, "non-numeric perf '" + std::string(cells[5]) + "'");
    if (!f) throw ParseError(lineno, "non-numeric interference '" + std::string(cells[6]) + "'");
    if (!n) throw ParseError(lineno, "non-numeric tasked_size '" + std::string(cells[7]) + "'");
    if (!(*p >= 0.0) || !std::isfinite(*p)) throw ParseError(lineno, "negative performance value");
    if (!(*f >= 0.0 && *f <= 1.0)) throw ParseError(lineno, "interference outside [0,1]");
    if (!(*n >= 0.0) || !std::isfinite(*n)) throw ParseError(lineno, "negative tasked_size");
    perf.push_back(*p);
    intf.push_back(*f);
    pop.push_back(*n);
  }

  CurveBundle b;
  const auto len = info.interval_len;
  b.performance = PerformanceCurve(std::move(perf), info);
  b.interference = InterferenceCurve(std::move(intf), info);
  b.population = PopulationCurve(std::move(pop), len);
  b.run_seed = seed;
  return b;
}

void write_curves(const CurveBundle& bundle, const std::filesystem::path& path) {
  write_file_atomic(path, format_curves(bundle));
}

CurveBundle read_curves(const std::filesystem::path& path) { return parse_curves(read_file(path)); }

}  // namespace swarmetrics
