#pragma once

#include <cstdint>
#include <random>

namespace swarmetrics::sim {

/// Named random streams. Each perturbation family draws from its own stream
/// so enabling one never shifts another's draws.
enum class Stream : std::uint64_t {
  Placement = 1,
  Controller = 2,
  Noise = 3,
  Population = 4,
  BlockMotion = 5,
  QueueValidator = 6,
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Mixes a base seed with up to three coordinates into an independent seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

class RandomStream {
 public:
  RandomStream() : RandomStream(0, Stream::Placement) {}
  RandomStream(std::uint64_t seed, Stream stream, std::uint64_t index = 0);

  double uniform() { return uniform_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal(double mean, double stddev);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace swarmetrics::sim
