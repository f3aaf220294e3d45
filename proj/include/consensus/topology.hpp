#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "consensus/graph.hpp"

namespace consensus {

/// Agent `receiver` hears `sender` at its updates k with k % period == phase.
struct ReceptionRule {
  std::size_t receiver = 0;
  std::size_t sender = 0;
  std::size_t period = 1;
  std::size_t phase = 0;
};

/// Which neighbors each agent successfully receives at each of its updates.
/// Received sets are always subsets of the base graph's neighbor sets.
class TopologyProcess {
 public:
  enum class Kind { kFixed, kPeriodic, kRandom };

  static TopologyProcess fixed(DirectedWeightedGraph g);
  /// Throws std::invalid_argument if a rule names a non-edge or has period 0.
  static TopologyProcess periodic(DirectedWeightedGraph g, std::vector<ReceptionRule> rules);
  /// Each edge delivers independently with the given probability.
  static TopologyProcess random(DirectedWeightedGraph g, double probability, std::uint64_t seed);

  Kind kind() const { return kind_; }
  const DirectedWeightedGraph& graph() const { return graph_; }
  const std::vector<ReceptionRule>& rules() const { return rules_; }
  double probability() const { return probability_; }

  /// Ascending neighbor indices received by `agent` at its update `update_index`.
  std::vector<std::size_t> received(std::size_t agent, std::size_t update_index) const;

 private:
  Kind kind_ = Kind::kFixed;
  DirectedWeightedGraph graph_;
  std::vector<ReceptionRule> rules_;
  double probability_ = 1.0;
  std::uint64_t seed_ = 0;
};

}  // namespace consensus

namespace consensus {

struct UpdateSchedule;

/// One update of one agent together with the set it received there. The
/// received set defines that agent's incoming edges in the reception graph
/// until its next update.
struct PlannedUpdate {
  double time = 0.0;
  std::vector<std::size_t> received;
};

struct CommunicationPlan {
  std::size_t n = 0;
  std::vector<std::vector<PlannedUpdate>> updates;  // per agent, ascending time

  /// Index of agent i's last update at or before t, if any.
  std::optional<std::size_t> active_update(std::size_t agent, double t) const;
  /// Reception graph (unit weights) in force at time t.
  Matrix reception_pattern(double t) const;
  /// Union of the reception graphs over [t0, t1].
  Matrix reception_union(double t0, double t1) const;
};

/// Updates at or before the horizon, with their received sets.
CommunicationPlan plan_communication(std::span<const UpdateSchedule> schedules,
                                     const TopologyProcess& tp, double horizon);

}  // namespace consensus
