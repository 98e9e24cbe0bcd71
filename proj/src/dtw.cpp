#include "swarmetrics/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace swarmetrics {

double point_cost(PointCost cost, double a, double b) {
  const double d = a - b;
  return cost == PointCost::SquaredDifference ? d * d : std::abs(d);
}

double dtw_distance(std::span<const double> x, std::span<const double> y, const DtwConfig& cfg) {
  if (x.empty() || y.empty()) throw std::invalid_argument("dtw_distance: empty sequence");
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  const std::size_t gap = n > m ? n - m : m - n;
  if (cfg.window && gap > *cfg.window)
    throw std::invalid_argument("dtw_distance: length difference exceeds window");

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(m, inf), cur(m, inf);

  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = 0, hi = m - 1;
    if (cfg.window) {
      const std::size_t w = *cfg.window;
      lo = i > w ? i - w : 0;
      hi = std::min(m - 1, i + w);
    }
    std::fill(cur.begin(), cur.end(), inf);
    for (std::size_t j = lo; j <= hi; ++j) {
      const double c = point_cost(cfg.cost, x[i], y[j]);
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else {
        best = inf;
        if (i > 0) best = std::min(best, prev[j]);
        if (j > 0) best = std::min(best, cur[j - 1]);
        if (i > 0 && j > 0) best = std::min(best, prev[j - 1]);
      }
      cur[j] = best + c;
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

}  // namespace swarmetrics
