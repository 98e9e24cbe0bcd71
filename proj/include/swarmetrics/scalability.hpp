#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace swarmetrics {

enum class ZeroPolicy {
  Skip,   // drop intervals where either curve is zero
  Clamp,  // substitute clamp_epsilon for the zero value
};

struct ScalabilityOptions {
  ZeroPolicy zero_policy = ZeroPolicy::Skip;
  double clamp_epsilon = 1e-9;
  /// Use P(N2)/P(N1) directly in the serial-fraction numerator instead of its
  /// reciprocal. Off by default: with throughput-like P that form scores
  /// perfect scaling as -r.
  bool literal_numerator = false;
};

/// Karp-Flatt serial fraction e = (1/psi - 1/r) / (1 - 1/r) for speedup psi
/// over a resource ratio r > 1.
double serial_fraction(double speedup, double ratio);

/// Per-interval 1 - e_t with psi_t = P(N2,t)/P(N1,t), r = N2/N1. Skipped
/// intervals are absent from the result.
std::vector<double> karp_flatt_terms(std::span<const double> perf_n1,
                                     std::span<const double> perf_n2, std::size_t n1,
                                     std::size_t n2, const ScalabilityOptions& opts = {});

/// Sum of karp_flatt_terms. 1 per interval under perfect speedup, 0 with no
/// speedup, negative when the larger swarm performs worse.
double karp_flatt_scalability(std::span<const double> perf_n1, std::span<const double> perf_n2,
                              std::size_t n1, std::size_t n2, const ScalabilityOptions& opts = {});

}  // namespace swarmetrics
