#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "consensus/graph.hpp"
#include "consensus/scenario.hpp"
#include "consensus/scheduler.hpp"
#include "consensus/topology.hpp"

namespace consensus {

/// On [t_start, t_end] the state solves x' = target - x from x_start.
struct Segment {
  double t_start = 0.0;
  double t_end = 0.0;
  double x_start = 0.0;
  double target = 0.0;

  double value_at(double t) const;
};

/// Piecewise-exponential state history of one agent. Before time 0 the
/// state is the constant initial value.
class AgentTrajectory {
 public:
  explicit AgentTrajectory(double initial = 0.0) : initial_(initial) {}

  double initial() const { return initial_; }
  const std::vector<Segment>& segments() const { return segments_; }
  /// End of the last segment, or 0 when empty.
  double end_time() const { return segments_.empty() ? 0.0 : segments_.back().t_end; }

  /// Appends a segment starting where the previous one ended (or at 0).
  /// Throws std::invalid_argument on gaps, overlaps or a discontinuity.
  void append(const Segment& s);

 private:
  double initial_;
  std::vector<Segment> segments_;
};

/// Exact closed-form state. t <= 0 yields the initial value; t beyond the
/// simulated end throws std::out_of_range.
double evaluate(const AgentTrajectory& tr, double t);

/// A neighbor value consumed at an update. `read_time` is when the sample
/// was requested for; `effective_time` is the instant the used value
/// describes (they differ only after most-recent-data substitution).
struct ReadRecord {
  std::size_t neighbor = 0;
  double read_time = 0.0;
  double value = 0.0;
  double effective_time = 0.0;
  std::size_t update_index = 0;
};

/// The record with the latest effective time; ties go to the later update.
/// Throws std::invalid_argument on an empty history.
ReadRecord most_recent_data_filter(std::span<const ReadRecord> history);

/// Target of agent i's new segment, or nullopt when nothing was received
/// (the agent holds its state). Throws InvalidReception for non-edges.
std::optional<double> step_agent(std::size_t i, std::span<const ReadRecord> reads,
                                 const DirectedWeightedGraph& g);

/// Everything that happened at one update of one agent.
struct UpdateRecord {
  std::size_t agent = 0;
  std::size_t update_index = 0;
  double time = 0.0;
  std::size_t event_index = 0;
  std::vector<std::size_t> received;
  std::vector<double> raw_read_times;  // parallel to `received`
  std::vector<ReadRecord> used;        // parallel to `received`
  double start_value = 0.0;
  double target = 0.0;
};

struct RunResult {
  std::size_t n = 0;
  double horizon = 0.0;
  bool delayed = false;
  std::size_t K = 0;
  double tau_u_min = 0.0;
  double tau_u_max = 0.0;
  Strategy strategy = Strategy::kPlain;
  std::vector<double> initial_state;
  DirectedWeightedGraph graph;
  std::vector<UpdateSchedule> schedules;
  CommunicationPlan plan;
  GlobalEventSequence events;
  std::vector<UpdateRecord> log;  // processing order
  std::vector<AgentTrajectory> trajectories;
  Matrix event_states;  // row k = x(t_k)

  std::vector<double> state_at(double t) const;
  std::vector<double> final_state() const { return state_at(horizon); }
};

enum class TieOrder { kAscendingAgent, kDescendingAgent };

/// Lower-level entry point: every ingredient supplied explicitly.
struct SimulationInput {
  TopologyProcess topology;
  std::vector<UpdateSchedule> schedules;
  DelayAssignment delays;
  Strategy strategy = Strategy::kPlain;
  std::vector<double> initial_state;
  double horizon = 0.0;
  std::size_t K = 0;
  double tau_u_min = 0.0;
  double tau_u_max = 0.0;
  TieOrder ties = TieOrder::kAscendingAgent;
};

RunResult simulate(const SimulationInput& in);

/// Validates the scenario and runs it. Deterministic for a fixed config.
RunResult run(const ScenarioConfig& c);

}  // namespace consensus
