#include "swarmetrics/scalability.hpp"

#include <stdexcept>
#include <string>

namespace swarmetrics {

double serial_fraction(double speedup, double ratio) {
  if (!(ratio > 1.0)) throw std::invalid_argument("serial_fraction: ratio must be > 1");
  if (!(speedup > 0.0)) throw std::invalid_argument("serial_fraction: speedup must be > 0");
  return (1.0 / speedup - 1.0 / ratio) / (1.0 - 1.0 / ratio);
}

std::vector<double> karp_flatt_terms(std::span<const double> perf_n1,
                                     std::span<const double> perf_n2, std::size_t n1,
                                     std::size_t n2, const ScalabilityOptions& opts) {
  if (n1 == 0 || n1 >= n2)
    throw std::invalid_argument("karp_flatt_scalability requires 0 < N1 < N2 (got " +
                                std::to_string(n1) + ", " + std::to_string(n2) + ")");
  if (perf_n1.size() != perf_n2.size())
    throw std::invalid_argument("karp_flatt_scalability: curve length mismatch");
  if (opts.zero_policy == ZeroPolicy::Clamp && !(opts.clamp_epsilon > 0.0))
    throw std::invalid_argument("clamp_epsilon must be > 0");

  const double r = static_cast<double>(n2) / static_cast<double>(n1);
  std::vector<double> terms;
  terms.reserve(perf_n1.size());
  for (std::size_t t = 0; t < perf_n1.size(); ++t) {
    double p1 = perf_n1[t];
    double p2 = perf_n2[t];
    const bool zero = p1 <= 0.0 || (!opts.literal_numerator && p2 <= 0.0);
    if (zero) {
      if (opts.zero_policy == ZeroPolicy::Skip) continue;
      if (p1 <= 0.0) p1 = opts.clamp_epsilon;
      if (p2 <= 0.0) p2 = opts.clamp_epsilon;
    }
    const double psi = p2 / p1;
    double e;
    if (opts.literal_numerator) {
      e = (psi - 1.0 / r) / (1.0 - 1.0 / r);
    } else {
      e = serial_fraction(psi, r);
    }
    terms.push_back(1.0 - e);
  }
  return terms;
}

double karp_flatt_scalability(std::span<const double> perf_n1, std::span<const double> perf_n2,
                              std::size_t n1, std::size_t n2, const ScalabilityOptions& opts) {
  double sum = 0.0;
  for (double v : karp_flatt_terms(perf_n1, perf_n2, n1, n2, opts)) sum += v;
  return sum;
}

}  // namespace swarmetrics
