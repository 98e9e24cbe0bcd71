#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

#include "swarmetrics/dtw.hpp"

namespace swarmetrics {

/// Per-timestep event rates of the population queues.
///   lambda_d:  permanent removal from the tasked set S
///   lambda_bd: temporary removal (malfunction / reallocation)
///   mu_b:      addition of robots released from other tasks
///   mu_bd:     return after repair / reallocation
struct QueueRates {
  double lambda_d = 0.0;
  double lambda_bd = 0.0;
  double mu_b = 0.0;
  double mu_bd = 0.0;

  double departure_rate() const { return lambda_d + lambda_bd; }
  double service_rate() const { return mu_b + mu_bd; }
  bool all_zero() const { return lambda_d == 0 && lambda_bd == 0 && mu_b == 0 && mu_bd == 0; }
  /// Throws std::invalid_argument for negative or non-finite rates.
  void validate() const;

  bool operator==(const QueueRates&) const = default;
};

class UnstableQueueError : public std::domain_error {
 public:
  explicit UnstableQueueError(const std::string& what) : std::domain_error(what) {}
};

/// DTW between the noise-free curve and the noisy curve; 0 is optimal.
double sa_robustness(std::span<const double> perf_ideal, std::span<const double> perf_actual,
                     const DtwConfig& dtw = {});

/// rho = (lambda_d + lambda_bd) / (mu_b + mu_bd). Throws when the service rate is 0.
double utilization(const QueueRates& rates);
bool is_stable(const QueueRates& rates);

/// Mean number of robots waiting in the not-tasked queue, rho^2 / (1 - rho).
double queue_length(double rho);

/// Mean time a robot spends outside S:
/// 1/(mu - lambda) + 1/mu with mu = mu_b + mu_bd, lambda = lambda_d + lambda_bd.
double time_not_tasked(const QueueRates& rates);

/// T_S = T - T_S-bar, or T for all-zero rates (no population dynamics).
double time_tasked(const QueueRates& rates, double total_time);

/// T_S / T_S_ideal, the allowance pd_robustness gives for population variance.
double population_weight(const QueueRates& rates, const QueueRates& rates_ideal, double total_time);

/// Sum over t of P(t) - w * P_ideal(t), w = population_weight. Higher is better.
double pd_robustness(std::span<const double> perf_ideal, std::span<const double> perf_actual,
                     const QueueRates& rates, const QueueRates& rates_ideal, double total_time);

/// Steady-state probability that all N robots are in the not-tasked queue of
/// an M/M/1/N queue with utilisation rho: rho^N (1-rho) / (1 - rho^(N+1)).
double all_untasked_probability(double rho, std::size_t swarm_size);

/// Swarm availability p_v = pi_N (1 + sum_{k=N_min}^{N-1} prod_{i=k+1}^{N} 1/rho),
/// clamped to [0,1]. Requires 0 < rho < 1 and 1 <= N_min <= N.
///
/// With pi_N as above, p_v is the stationary probability that the not-tasked
/// queue holds at least N_min robots.
double availability(double rho, std::size_t swarm_size, std::size_t n_min);

/// Stationary probability that at least N_min robots are tasked,
/// sum_{n=0}^{N-N_min} pi_n. Defined for 0 <= rho < 1.
double tasked_availability(double rho, std::size_t swarm_size, std::size_t n_min);

}  // namespace swarmetrics
