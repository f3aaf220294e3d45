#include "consensus/builtin.hpp"

#include <cmath>
#include <numbers>

namespace consensus::builtin {

Matrix reference_weights() {
  return Matrix{{0, 1, 1, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}};
}

ScenarioConfig example_fixed(std::uint64_t seed, double horizon) {
  ScenarioConfig c;
  c.name = "example-fixed";
  c.n = 4;
  c.tau_u_min = 0.2;
  c.tau_u_max = 0.9;
  c.topology.weights = reference_weights();
  c.initial_state = {5, 6, 7, 8};
  c.seed = seed;
  c.horizon = horizon;
  c.sample_dt = 0.1;
  return c;
}

ScenarioConfig example_fixed_synchronous(std::uint64_t seed, double horizon) {
  auto c = example_fixed(seed, horizon);
  c.name = "example-fixed-synchronous";
  c.schedule = ScheduleKind::kSynchronous;
  return c;
}

ScenarioConfig counterexample(std::size_t events) {
  ScenarioConfig c;
  c.name = "counterexample";
  c.n = 2;
  c.schedule = ScheduleKind::kExplicit;
  double t = 0.0;
  for (std::size_t k = 0; k < events; ++k) {
    c.gaps.push_back(static_cast<double>(k + 3) * std::numbers::ln2);
    t += c.gaps.back();
  }
  c.tau_u_min = c.gaps.front();
  c.tau_u_max = c.gaps.back();
  c.topology.weights = Matrix{{0, 1}, {1, 0}};
  c.initial_state = {1, -1};
  c.horizon = t;
  c.sample_dt = 1.0;
  return c;
}

ScenarioConfig example_delay(std::size_t K, Strategy strategy, std::uint64_t seed, double horizon) {
  auto c = example_fixed(seed, horizon);
  c.name = "example-delay";
  c.K = K;
  c.delay_policy = DelayPolicy::kUniform;
  c.strategy = strategy;
  return c;
}

ScenarioConfig example_switching(std::uint64_t seed, double horizon) {
  auto c = example_fixed(seed, horizon);
  c.name = "example-switching";
  c.K = 10;
  c.delay_policy = DelayPolicy::kUniform;
  c.topology.kind = TopologyProcess::Kind::kPeriodic;
  c.topology.weights = Matrix{{0, 1, 1, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}};
  c.topology.rules = {{0, 1, 4, 0}, {0, 2, 4, 2}, {1, 0, 4, 1}, {2, 1, 4, 2}, {3, 2, 4, 3}};
  return c;
}

std::vector<std::string> names() {
  return {"example-fixed", "counterexample", "example-delay", "example-switching"};
}

}  // namespace consensus::builtin
