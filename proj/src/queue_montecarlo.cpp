#include "swarmetrics/queue_montecarlo.hpp"

#include <deque>
#include <stdexcept>

#include "swarmetrics/sim/rng.hpp"

namespace swarmetrics {

double QueueSimulationResult::availability(std::size_t n_min) const {
  double p = 0.0;
  for (std::size_t n = n_min; n < queue_frequency.size(); ++n) p += queue_frequency[n];
  return p;
}

double QueueSimulationResult::tasked_availability(std::size_t n_min) const {
  double p = 0.0;
  for (std::size_t n = n_min; n < tasked_frequency.size(); ++n) p += tasked_frequency[n];
  return p;
}

QueueSimulationResult simulate_untasked_queue(const QueueRates& rates, std::size_t swarm_size,
                                              std::size_t steps, std::uint64_t seed) {
  rates.validate();
  if (swarm_size == 0) throw std::invalid_argument("swarm size must be >= 1");
  const double lambda = rates.departure_rate();
  const double mu = rates.service_rate();
  if (lambda + mu > 1.0)
    throw std::invalid_argument("per-step rates must sum to at most 1 for the Bernoulli model");

  sim::RandomStream rng(seed, sim::Stream::QueueValidator);

  std::vector<std::size_t> tasked;  // robot ids currently in S
  for (std::size_t i = 0; i < swarm_size; ++i) tasked.push_back(i);
  std::deque<std::size_t> queue;
  std::vector<std::size_t> reentering;
  std::vector<std::size_t> left_at(swarm_size, 0);

  QueueSimulationResult out;
  out.steps = steps;
  out.queue_frequency.assign(swarm_size + 1, 0.0);
  out.tasked_frequency.assign(swarm_size + 1, 0.0);
  double episode_total = 0.0;
  double waiting_total = 0.0;
  double occupancy_total = 0.0;

  for (std::size_t t = 1; t <= steps; ++t) {
    // re-entry completions
    for (std::size_t k = 0; k < reentering.size();) {
      if (rng.uniform() < mu) {
        const std::size_t id = reentering[k];
        episode_total += static_cast<double>(t - left_at[id]);
        ++out.episodes;
        tasked.push_back(id);
        reentering[k] = reentering.back();
        reentering.pop_back();
      } else {
        ++k;
      }
    }

    const double p_arrival = tasked.empty() ? 0.0 : lambda;
    const double p_service = queue.empty() ? 0.0 : mu;
    const double u = rng.uniform();
    if (u < p_arrival) {
      const std::size_t pick = rng.below(tasked.size());
      const std::size_t id = tasked[pick];
      tasked[pick] = tasked.back();
      tasked.pop_back();
      left_at[id] = t;
      queue.push_back(id);
    } else if (u < p_arrival + p_service) {
      reentering.push_back(queue.front());
      queue.pop_front();
    }

    const std::size_t n = queue.size();
    out.queue_frequency[n] += 1.0;
    out.tasked_frequency[tasked.size()] += 1.0;
    occupancy_total += static_cast<double>(n);
    waiting_total += n > 0 ? static_cast<double>(n - 1) : 0.0;
  }

  const double denom = steps > 0 ? static_cast<double>(steps) : 1.0;
  for (auto& f : out.queue_frequency) f /= denom;
  for (auto& f : out.tasked_frequency) f /= denom;
  out.mean_queue_length = waiting_total / denom;
  out.mean_queue_occupancy = occupancy_total / denom;
  out.mean_time_not_tasked = out.episodes > 0 ? episode_total / static_cast<double>(out.episodes) : 0.0;
  return out;
}

}  // namespace swarmetrics
