#include "consensus/scenario.hpp"

#include <cmath>
#include <string>

#include "consensus/errors.hpp"

namespace consensus {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void validate(const ScenarioConfig& c) {
  require(c.n >= 1, "n must be at least 1");
  require(c.tau_u_min > 0.0 && c.tau_u_max >= c.tau_u_min && std::isfinite(c.tau_u_max),
          "need 0 < tau_u_min <= tau_u_max");
  require(c.horizon >= 0.0 && std::isfinite(c.horizon), "horizon must be finite and >= 0");
  require(c.sample_dt > 0.0, "sample_dt must be positive");
  require(c.initial_state.size() == c.n, "initial_state must have n entries");
  for (double v : c.initial_state) require(std::isfinite(v), "initial_state must be finite");
  require(c.topology.weights.rows() == c.n && c.topology.weights.cols() == c.n,
          "weights must be an n x n matrix");
  if (c.schedule == ScheduleKind::kExplicit) {
    require(!c.gaps.empty(), "explicit schedule needs gaps");
    for (double g : c.gaps)
      require(g >= c.tau_u_min - 1e-12 && g <= c.tau_u_max + 1e-12,
              "explicit gaps must lie in [tau_u_min, tau_u_max]");
  }
  if (c.delay_policy == DelayPolicy::kExplicit) {
    require(c.delay_matrix.rows() == c.n && c.delay_matrix.cols() == c.n,
            "delay matrix must be n x n");
    for (double d : c.delay_matrix.data())
      require(d >= 0.0 && d <= c.max_delay() + 1e-12, "explicit delays must lie in [0, K*tau_u_min]");
  }
  if (c.topology.kind == TopologyProcess::Kind::kRandom)
    require(c.topology.probability >= 0.0 && c.topology.probability <= 1.0,
            "probability must lie in [0, 1]");
  try {
    make_topology(c);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

DirectedWeightedGraph make_graph(const ScenarioConfig& c) {
  if (c.topology.has_bounds) return DirectedWeightedGraph(c.topology.weights, c.topology.bounds);
  return DirectedWeightedGraph(c.topology.weights);
}

TopologyProcess make_topology(const ScenarioConfig& c) {
  auto g = make_graph(c);
  switch (c.topology.kind) {
    case TopologyProcess::Kind::kFixed:
      return TopologyProcess::fixed(std::move(g));
    case TopologyProcess::Kind::kPeriodic:
      return TopologyProcess::periodic(std::move(g), c.topology.rules);
    case TopologyProcess::Kind::kRandom:
      return TopologyProcess::random(std::move(g), c.topology.probability, c.seed);
  }
  return TopologyProcess::fixed(std::move(g));
}

std::vector<UpdateSchedule> make_schedules(const ScenarioConfig& c) {
  switch (c.schedule) {
    case ScheduleKind::kRandom:
      return generate_schedules(c.n, c.tau_u_min, c.tau_u_max, c.seed, c.horizon);
    case ScheduleKind::kSynchronous:
      return synchronous_schedules(c.n, c.tau_u_min, c.tau_u_max, c.seed, c.horizon);
    case ScheduleKind::kExplicit:
      return explicit_schedules(c.n, c.gaps, c.horizon);
  }
  return {};
}

DelayAssignment make_delays(const ScenarioConfig& c) {
  switch (c.delay_policy) {
    case DelayPolicy::kNone:
      return DelayAssignment::none();
    case DelayPolicy::kUniform:
      return DelayAssignment::uniform(c.max_delay(), c.seed);
    case DelayPolicy::kAlwaysMax:
      return DelayAssignment::always_max(c.max_delay());
    case DelayPolicy::kExplicit:
      return DelayAssignment::fixed(c.delay_matrix);
  }
  return DelayAssignment::none();
}

const char* to_string(Strategy s) {
  return s == Strategy::kPlain ? "plain" : "most-recent-data";
}

const char* to_string(DelayPolicy p) {
  switch (p) {
    case DelayPolicy::kNone: return "none";
    case DelayPolicy::kUniform: return "uniform";
    case DelayPolicy::kExplicit: return "explicit";
    case DelayPolicy::kAlwaysMax: return "always-max";
  }
  return "none";
}

const char* to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::kRandom: return "random";
    case ScheduleKind::kSynchronous: return "synchronous";
    case ScheduleKind::kExplicit: return "explicit";
  }
  return "random";
}

const char* to_string(TopologyProcess::Kind k) {
  switch (k) {
    case TopologyProcess::Kind::kFixed: return "fixed";
    case TopologyProcess::Kind::kPeriodic: return "periodic";
    case TopologyProcess::Kind::kRandom: return "random";
  }
  return "fixed";
}

}  // namespace consensus
