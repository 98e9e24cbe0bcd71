#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "swarmetrics/robustness.hpp"

namespace swarmetrics {

/// Output of a discrete-time simulation of the not-tasked queue.
struct QueueSimulationResult {
  std::size_t steps = 0;
  std::size_t episodes = 0;             // completed out-of-S episodes
  double mean_time_not_tasked = 0.0;    // timesteps per completed episode
  double mean_queue_length = 0.0;       // time-average robots waiting (excluding service)
  double mean_queue_occupancy = 0.0;    // time-average robots in the queue incl. service
  std::vector<double> queue_frequency;  // fraction of steps with n robots queued, n = 0..N
  std::vector<double> tasked_frequency; // fraction of steps with n robots tasked, n = 0..N

  /// Fraction of steps with at least n_min robots in the not-tasked queue.
  double availability(std::size_t n_min) const;
  /// Fraction of steps with at least n_min robots tasked.
  double tasked_availability(std::size_t n_min) const;
};

/// Simulates N robots moving between the tasked set S and the combined
/// not-tasked queue. Per timestep at most one queue event occurs: with
/// probability lambda_d + lambda_bd a tasked robot leaves S and joins the
/// queue; otherwise with probability mu_b + mu_bd the robot at the head of a
/// non-empty queue is released. A released robot re-enters S after a
/// geometric delay with mean 1/(mu_b + mu_bd). Uses a private RNG stream.
QueueSimulationResult simulate_untasked_queue(const QueueRates& rates, std::size_t swarm_size,
                                              std::size_t steps, std::uint64_t seed);

}  // namespace swarmetrics
