#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace swarmetrics {

/// Curves from dedicated single-robot runs of the same scenario.
struct SingleRobotBaseline {
  std::span<const double> performance;
  std::span<const double> interference;
};

/// Performance lost to inter-robot interference per interval.
///
/// For N = 1 this is P(1,t) * T_lost(1,t). For N > 1 the interference N
/// independent robots would have suffered is subtracted:
/// P(N,t) * T_lost(N,t) - N * P_lost(1,t). Values below zero mean the swarm
/// interferes less than N isolated robots would. The baseline is required
/// when swarm_size > 1 and ignored otherwise.
std::vector<double> performance_lost(std::span<const double> performance,
                                     std::span<const double> interference, std::size_t swarm_size,
                                     const std::optional<SingleRobotBaseline>& baseline);

/// Sum over t of (N2/N1) * P_lost(N1,t) - P_lost(N2,t). Positive values mean
/// interference grew sub-linearly with swarm size.
double spatial_self_organization(std::span<const double> lost_n1, std::span<const double> lost_n2,
                                 std::size_t n1, std::size_t n2);

/// Sum over t of P(N2,t) - (N2/N1) * P(N1,t). Positive values mean a
/// super-linear marginal performance gain.
double task_self_organization(std::span<const double> perf_n1, std::span<const double> perf_n2,
                              std::size_t n1, std::size_t n2);

}  // namespace swarmetrics
