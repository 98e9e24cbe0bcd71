// Independent reference implementations and helpers shared by the tests.
#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <Eigen/Dense>

namespace oracle {

// Minimum path cost by enumerating every monotone, continuous path from
// (0,0) to (n-1,m-1). Exponential; for short sequences only.
inline double dtw_enumerate(const std::vector<double>& x, const std::vector<double>& y,
                            bool squared = false) {
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j,
                                                                   double acc) {
    const double d = x[i] - y[j];
    acc += squared ? d * d : std::abs(d);
    if (i + 1 == x.size() && j + 1 == y.size()) {
      best = std::min(best, acc);
      return;
    }
    if (i + 1 < x.size()) walk(i + 1, j, acc);
    if (j + 1 < y.size()) walk(i, j + 1, acc);
    if (i + 1 < x.size() && j + 1 < y.size()) walk(i + 1, j + 1, acc);
  };
  walk(0, 0, 0.0);
  return best;
}

// Stationary distribution of the discrete-time queue-length chain on 0..N
// with one arrival (prob. lambda, n < N) or one departure (prob. mu, n > 0)
// per step, from a dense linear solve.
inline std::vector<double> queue_stationary(double lambda, double mu, std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n + 1);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(size, size);
  for (Eigen::Index s = 0; s < size; ++s) {
    double stay = 1.0;
    if (s + 1 < size) {
      p(s, s + 1) = lambda;
      stay -= lambda;
    }
    if (s > 0) {
      p(s, s - 1) = mu;
      stay -= mu;
    }
    p(s, s) = stay;
  }
  // pi (P - I) = 0 with sum(pi) = 1 replacing the last equation.
  Eigen::MatrixXd a = (p - Eigen::MatrixXd::Identity(size, size)).transpose();
  a.row(size - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(size);
  b(size - 1) = 1.0;
  Eigen::VectorXd pi = a.fullPivLu().solve(b);
  return {pi.data(), pi.data() + size};
}

// P(queue length >= n_min) under the stationary distribution.
inline double queue_tail(const std::vector<double>& pi, std::size_t n_min) {
  double s = 0.0;
  for (std::size_t k = n_min; k < pi.size(); ++k) s += pi[k];
  return s;
}

inline std::vector<double> random_curve(std::mt19937_64& rng, std::size_t n, double lo = 0.0,
                                        double hi = 10.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::path(SWARMETRICS_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ProcessResult {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs the CLI binary in a child process with the given argument string.
inline ProcessResult run_cli(const std::string& args, const std::filesystem::path& work) {
  const auto out = work / "stdout.txt";
  const auto err = work / "stderr.txt";
  const std::string cmd = std::string("\"") + SWARMETRICS_CLI + "\" " + args + " >\"" +
                          out.string() + "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  ProcessResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace oracle
