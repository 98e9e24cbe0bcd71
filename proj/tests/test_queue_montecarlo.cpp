#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "swarmetrics/queue_montecarlo.hpp"

using namespace swarmetrics;

TEST_CASE("queue simulation agrees with the closed forms") {
  const QueueRates rates{0.0, 0.002, 0.002, 0.006};
  const double rho = utilization(rates);
  auto r = simulate_untasked_queue(rates, 10, 400000, 21);
  CHECK(r.episodes > 100);
  CHECK(r.mean_time_not_tasked == doctest::Approx(time_not_tasked(rates)).epsilon(0.1));
  CHECK(r.mean_queue_length == doctest::Approx(queue_length(rho)).epsilon(0.15));
  auto pi = oracle::queue_stationary(rates.departure_rate(), rates.service_rate(), 10);
  for (std::size_t m = 1; m <= 3; ++m) CHECK(std::abs(r.availability(m) - oracle::queue_tail(pi, m)) < 0.03);
}

TEST_CASE("queue simulation bookkeeping") {
  const QueueRates rates{0.0, 0.01, 0.01, 0.02};
  auto r = simulate_untasked_queue(rates, 5, 20000, 3);
  double total = 0, total_t = 0;
  for (double f : r.queue_frequency) total += f;
  for (double f : r.tasked_frequency) total_t += f;
  CHECK(total == doctest::Approx(1.0));
  CHECK(total_t == doctest::Approx(1.0));
  CHECK(r.availability(0) == doctest::Approx(1.0));
  CHECK(r.mean_queue_occupancy >= r.mean_queue_length);

  auto again = simulate_untasked_queue(rates, 5, 20000, 3);
  CHECK(again.queue_frequency == r.queue_frequency);
  CHECK(again.mean_time_not_tasked == r.mean_time_not_tasked);
}

TEST_CASE("queue simulation without departures never leaves S") {
  auto r = simulate_untasked_queue({0, 0, 0.01, 0.01}, 4, 1000, 1);
  CHECK(r.episodes == 0);
  CHECK(r.queue_frequency[0] == 1.0);
  CHECK(r.tasked_availability(4) == 1.0);
}

TEST_CASE("queue simulation rejects invalid input") {
  CHECK_THROWS_AS(simulate_untasked_queue({0, 0.6, 0.5, 0}, 4, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(simulate_untasked_queue({0, 0.1, 0.5, 0}, 0, 10, 1), std::invalid_argument);
}
