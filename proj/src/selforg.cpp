#include "swarmetrics/selforg.hpp"

#include <stdexcept>
#include <string>

namespace swarmetrics {

namespace {

void check_pair(std::size_t n1, std::size_t n2) {
  if (n1 == 0 || n1 >= n2)
    throw std::invalid_argument("swarm sizes must satisfy 0 < N1 < N2 (got " + std::to_string(n1) +
                                ", " + std::to_string(n2) + ")");
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b)
    throw std::invalid_argument("curve length mismatch (" + std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
}

}  // namespace

std::vector<double> performance_lost(std::span<const double> performance,
                                     std::span<const double> interference, std::size_t swarm_size,
                                     const std::optional<SingleRobotBaseline>& baseline) {
  if (swarm_size == 0) throw std::invalid_argument("swarm_size must be >= 1");
  check_lengths(performance.size(), interference.size());
  for (double f : interference)
    if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("interference must lie in [0,1]");

  std::vector<double> lost(performance.size());
  for (std::size_t t = 0; t < lost.size(); ++t) lost[t] = performance[t] * interference[t];
  if (swarm_size == 1) return lost;

  if (!baseline) throw std::invalid_argument("missing N=1 baseline for performance_lost with N>1");
  auto single = performance_lost(baseline->performance, baseline->interference, 1, std::nullopt);
  check_lengths(single.size(), lost.size());
  const double n = static_cast<double>(swarm_size);
  for (std::size_t t = 0; t < lost.size(); ++t) lost[t] -= n * single[t];
  return lost;
}

double spatial_self_organization(std::span<const double> lost_n1, std::span<const double> lost_n2,
                                 std::size_t n1, std::size_t n2) {
  check_pair(n1, n2);
  check_lengths(lost_n1.size(), lost_n2.size());
  const double ratio = static_cast<double>(n2) / static_cast<double>(n1);
  double sum = 0.0;
  for (std::size_t t = 0; t < lost_n1.size(); ++t) sum += ratio * lost_n1[t] - lost_n2[t];
  return sum;
}

double task_self_organization(std::span<const double> perf_n1, std::span<const double> perf_n2,
                              std::size_t n1, std::size_t n2) {
  check_pair(n1, n2);
  check_lengths(perf_n1.size(), perf_n2.size());
  const double ratio = static_cast<double>(n2) / static_cast<double>(n1);
  double sum = 0.0;
  for (std::size_t t = 0; t < perf_n1.size(); ++t) sum += perf_n2[t] - ratio * perf_n1[t];
  return sum;
}

}  // namespace swarmetrics
