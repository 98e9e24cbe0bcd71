#include "swarmetrics/robustness.hpp"

#include <algorithm>
#include <cmath>

namespace swarmetrics {

void QueueRates::validate() const {
  for (double r : {lambda_d, lambda_bd, mu_b, mu_bd}) {
    if (!(r >= 0.0) || !std::isfinite(r))
      throw std::invalid_argument("queue rates must be finite and >= 0");
  }
}

double sa_robustness(std::span<const double> perf_ideal, std::span<const double> perf_actual,
                     const DtwConfig& dtw) {
  if (perf_ideal.size() != perf_actual.size())
    throw std::invalid_argument("sa_robustness: curve length mismatch");
  return dtw_distance(perf_ideal, perf_actual, dtw);
}

double utilization(const QueueRates& rates) {
  rates.validate();
  if (rates.service_rate() == 0.0)
    throw std::domain_error("utilization undefined: mu_b + mu_bd = 0");
  return rates.departure_rate() / rates.service_rate();
}

bool is_stable(const QueueRates& rates) {
  rates.validate();
  return rates.service_rate() > rates.departure_rate();
}

double queue_length(double rho) {
  if (!(rho >= 0.0)) throw std::invalid_argument("queue_length: rho must be >= 0");
  if (rho >= 1.0) throw UnstableQueueError("unstable queue: rho >= 1");
  return rho * rho / (1.0 - rho);
}

double time_not_tasked(const QueueRates& rates) {
  if (!is_stable(rates))
    throw UnstableQueueError("unstable queue: mu_b + mu_bd must exceed lambda_d + lambda_bd");
  const double mu = rates.service_rate();
  return 1.0 / (mu - rates.departure_rate()) + 1.0 / mu;
}

double time_tasked(const QueueRates& rates, double total_time) {
  if (!(total_time > 0.0)) throw std::invalid_argument("total_time must be > 0");
  if (rates.all_zero()) return total_time;
  return total_time - time_not_tasked(rates);
}

double population_weight(const QueueRates& rates, const QueueRates& rates_ideal,
                         double total_time) {
  const double ideal = time_tasked(rates_ideal, total_time);
  if (!(ideal > 0.0)) throw std::domain_error("T_S of the ideal rates must be > 0");
  return time_tasked(rates, total_time) / ideal;
}

double pd_robustness(std::span<const double> perf_ideal, std::span<const double> perf_actual,
                     const QueueRates& rates, const QueueRates& rates_ideal, double total_time) {
  if (perf_ideal.size() != perf_actual.size())
    throw std::invalid_argument("pd_robustness: curve length mismatch");
  const double w = population_weight(rates, rates_ideal, total_time);
  double sum = 0.0;
  for (std::size_t t = 0; t < perf_ideal.size(); ++t) sum += perf_actual[t] - w * perf_ideal[t];
  return sum;
}

namespace {

void check_rho_open(double rho) {
  if (rho >= 1.0) throw UnstableQueueError("unstable: rho >= 1");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must lie in (0,1)");
}

void check_sizes(std::size_t n, std::size_t n_min) {
  if (n == 0) throw std::invalid_argument("swarm size must be >= 1");
  if (n_min < 1 || n_min > n) throw std::invalid_argument("N_min must lie in [1, N]");
}

// log of (1 - rho) / (1 - rho^(N+1)), the normaliser of pi_n = rho^n * C
double log_normaliser(double rho, std::size_t n) {
  return std::log1p(-rho) - std::log1p(-std::pow(rho, static_cast<double>(n + 1)));
}

}  // namespace

double all_untasked_probability(double rho, std::size_t swarm_size) {
  check_rho_open(rho);
  if (swarm_size == 0) throw std::invalid_argument("swarm size must be >= 1");
  return std::exp(static_cast<double>(swarm_size) * std::log(rho) +
                  log_normaliser(rho, swarm_size));
}

double availability(double rho, std::size_t swarm_size, std::size_t n_min) {
  check_rho_open(rho);
  check_sizes(swarm_size, n_min);
  const double log_rho = std::log(rho);
  const double log_pi_n = static_cast<double>(swarm_size) * log_rho + log_normaliser(rho, swarm_size);
  // pi_N * prod_{i=k+1}^{N} 1/rho = exp(log pi_N - (N-k) log rho)
  double p = std::exp(log_pi_n);
  for (std::size_t k = n_min; k < swarm_size; ++k) {
    p += std::exp(log_pi_n - static_cast<double>(swarm_size - k) * log_rho);
  }
  return std::clamp(p, 0.0, 1.0);
}

double tasked_availability(double rho, std::size_t swarm_size, std::size_t n_min) {
  if (!(rho >= 0.0)) throw std::invalid_argument("rho must be >= 0");
  if (rho >= 1.0) throw UnstableQueueError("unstable: rho >= 1");
  check_sizes(swarm_size, n_min);
  const double c = (1.0 - rho) / (1.0 - std::pow(rho, static_cast<double>(swarm_size + 1)));
  double p = 0.0;
  double term = 1.0;
  for (std::size_t n = 0; n <= swarm_size - n_min; ++n) {
    p += term;
    term *= rho;
  }
  return std::clamp(c * p, 0.0, 1.0);
}

}  // namespace swarmetrics
