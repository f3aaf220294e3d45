#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "consensus/graph.hpp"
#include "consensus/scheduler.hpp"
#include "consensus/topology.hpp"

namespace consensus {

enum class ScheduleKind { kRandom, kSynchronous, kExplicit };
enum class Strategy { kPlain, kMostRecentData };
enum class DelayPolicy { kNone, kUniform, kExplicit, kAlwaysMax };

struct TopologySpec {
  TopologyProcess::Kind kind = TopologyProcess::Kind::kFixed;
  Matrix weights;
  bool has_bounds = false;
  WeightBounds bounds;
  std::vector<ReceptionRule> rules;  // periodic only
  double probability = 1.0;          // random only
};

/// Complete description of one run. Agent indices are 0-based here.
struct ScenarioConfig {
  std::string name = "scenario";
  std::size_t n = 0;
  double tau_u_min = 0.0;
  double tau_u_max = 0.0;
  std::size_t K = 0;
  ScheduleKind schedule = ScheduleKind::kRandom;
  std::vector<double> gaps;  // explicit schedule only
  TopologySpec topology;
  std::vector<double> initial_state;
  Strategy strategy = Strategy::kPlain;
  DelayPolicy delay_policy = DelayPolicy::kNone;
  Matrix delay_matrix;  // explicit delays only
  std::uint64_t seed = 0;
  double horizon = 0.0;
  double sample_dt = 0.1;

  double max_delay() const { return static_cast<double>(K) * tau_u_min; }
  bool delayed() const { return delay_policy != DelayPolicy::kNone; }
};

/// Throws ConfigError describing the first violated constraint.
void validate(const ScenarioConfig& c);

DirectedWeightedGraph make_graph(const ScenarioConfig& c);
TopologyProcess make_topology(const ScenarioConfig& c);
std::vector<UpdateSchedule> make_schedules(const ScenarioConfig& c);
DelayAssignment make_delays(const ScenarioConfig& c);

const char* to_string(Strategy s);
const char* to_string(DelayPolicy p);
const char* to_string(ScheduleKind k);
const char* to_string(TopologyProcess::Kind k);

}  // namespace consensus
