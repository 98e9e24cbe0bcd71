#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace swarmetrics {

enum class PointCost { AbsoluteDifference, SquaredDifference };

struct DtwConfig {
  PointCost cost = PointCost::AbsoluteDifference;
  /// Sakoe-Chiba half-width in points; std::nullopt searches the full matrix.
  std::optional<std::size_t> window;
};

double point_cost(PointCost cost, double a, double b);

/// Minimum cumulative point cost over monotone, continuous alignment paths
/// anchored at both ends, with steps (1,0), (0,1) and (1,1). Unnormalised.
///
/// Throws std::invalid_argument for empty input, or when the length difference
/// exceeds the window (no admissible path).
double dtw_distance(std::span<const double> x, std::span<const double> y,
                    const DtwConfig& cfg = {});

}  // namespace swarmetrics
