#pragma once

// Random instance generators and brute-force helpers shared by the unit
// suites. Nothing here calls into the code under test; scenarios are plain
// config values.

#include <cstdint>
#include <random>
#include <vector>

#include "consensus/matrix.hpp"
#include "consensus/scenario.hpp"

namespace testing {

using consensus::Matrix;

inline Matrix random_pattern(std::mt19937_64& gen, std::size_t n, double density, bool self_loops) {
  std::bernoulli_distribution edge(density);
  std::uniform_real_distribution<double> w(0.5, 2.0);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if ((self_loops || i != j) && edge(gen)) m(i, j) = w(gen);
  return m;
}

inline Matrix random_stochastic(std::mt19937_64& gen, std::size_t n, double zero_prob = 0.3) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = u(gen) < zero_prob ? 0.0 : u(gen);
      s += m(i, j);
    }
    if (s == 0.0) {
      m(i, i) = 1.0;
      s = 1.0;
    }
    for (std::size_t j = 0; j < n; ++j) m(i, j) /= s;
  }
  return m;
}

// Warshall closure: reach(a, b) iff a path a -> ... -> b exists (length >= 0),
// where m(i, j) > 0 is the edge j -> i.
inline std::vector<std::vector<bool>> transitive_closure(const Matrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a) {
    r[a][a] = true;
    for (std::size_t b = 0; b < n; ++b)
      if (m(b, a) > 0.0) r[a][b] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (r[a][k] && r[k][b]) r[a][b] = true;
  return r;
}

inline Matrix naive_multiply(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

struct ScenarioShape {
  std::size_t max_agents = 5;
  std::size_t max_K = 5;
  bool delays = true;
  double horizon = 20.0;
};

inline consensus::ScenarioConfig random_config(std::mt19937_64& gen, const ScenarioShape& shape) {
  using namespace consensus;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScenarioConfig c;
  c.n = std::uniform_int_distribution<std::size_t>(2, shape.max_agents)(gen);
  c.tau_u_min = 0.1 + 0.3 * u(gen);
  c.tau_u_max = c.tau_u_min * (1.0 + 2.0 * u(gen));
  c.seed = gen();
  c.horizon = shape.horizon;
  c.schedule = u(gen) < 0.15 ? ScheduleKind::kSynchronous : ScheduleKind::kRandom;
  Matrix w = random_pattern(gen, c.n, 0.6, false);
  c.topology.weights = w;
  c.topology.kind = u(gen) < 0.5 ? TopologyProcess::Kind::kFixed : TopologyProcess::Kind::kRandom;
  c.topology.probability = 0.4 + 0.6 * u(gen);
  c.initial_state.resize(c.n);
  for (double& x : c.initial_state) x = -5.0 + 10.0 * u(gen);
  if (shape.delays && u(gen) < 0.6) {
    c.K = std::uniform_int_distribution<std::size_t>(1, shape.max_K)(gen);
    c.delay_policy = u(gen) < 0.8 ? DelayPolicy::kUniform : DelayPolicy::kAlwaysMax;
    c.strategy = u(gen) < 0.5 ? Strategy::kMostRecentData : Strategy::kPlain;
  }
  return c;
}

}  // namespace testing
