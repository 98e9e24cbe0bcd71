#include "swarmetrics/sim/rng.hpp"

namespace swarmetrics::sim {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  for (std::uint64_t v : {a, b, c}) {
    s = h ^ v;
    h = splitmix64(s);
  }
  return h;
}

RandomStream::RandomStream(std::uint64_t seed, Stream stream, std::uint64_t index)
    : engine_(derive_seed(seed, static_cast<std::uint64_t>(stream), index)) {}

double RandomStream::normal(double mean, double stddev) {
  if (stddev == 0.0) return mean;
  return mean + stddev * normal_(engine_);
}

std::uint64_t RandomStream::below(std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
}

}  // namespace swarmetrics::sim
