#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "consensus/matrix.hpp"

namespace consensus {

/// Update instants of one agent: times[0] = 0 and consecutive gaps lie in
/// [tau_min, tau_max].
struct UpdateSchedule {
  std::size_t agent = 0;
  std::vector<double> times;
};

/// Independent uniform gaps per agent. Each sequence runs one update past
/// the horizon. Throws std::invalid_argument on bad bounds.
std::vector<UpdateSchedule> generate_schedules(std::size_t n, double tau_min, double tau_max,
                                               std::uint64_t seed, double horizon);

/// One shared schedule for all agents.
std::vector<UpdateSchedule> synchronous_schedules(std::size_t n, double tau_min,
                                                  double tau_max, std::uint64_t seed,
                                                  double horizon);

/// All agents share the given gap sequence; the last gap repeats if the
/// list runs out before the horizon.
std::vector<UpdateSchedule> explicit_schedules(std::size_t n, std::span<const double> gaps,
                                               double horizon);

/// Delays per (agent, update index, neighbor). Delays lie in [0, max_delay].
class DelayAssignment {
 public:
  enum class Policy { kNone, kUniform, kExplicit, kAlwaysMax };

  static DelayAssignment none();
  static DelayAssignment uniform(double max_delay, std::uint64_t seed);
  static DelayAssignment always_max(double max_delay);
  /// Constant per-edge delays; entry (i, j) applies to i reading j.
  static DelayAssignment fixed(Matrix delays);

  Policy policy() const { return policy_; }
  double max_delay() const { return max_delay_; }
  double delay(std::size_t agent, std::size_t update_index, std::size_t neighbor) const;

 private:
  Policy policy_ = Policy::kNone;
  double max_delay_ = 0.0;
  std::uint64_t seed_ = 0;
  Matrix fixed_;
};

/// A read by `agent` at its update `update_index`, of `neighbor`'s state at
/// `time`.
struct ReadAnnotation {
  std::size_t agent = 0;
  std::size_t neighbor = 0;
  std::size_t update_index = 0;
  double time = 0.0;
};

struct UpdateAnnotation {
  std::size_t agent = 0;
  std::size_t update_index = 0;
};

struct GlobalEvent {
  double time = 0.0;
  std::vector<UpdateAnnotation> updates;  // ascending agent index
  std::vector<ReadAnnotation> reads;
};

struct GlobalEventSequence {
  std::vector<GlobalEvent> events;

  std::size_t size() const { return events.size(); }
  double time(std::size_t k) const { return events[k].time; }
  std::vector<double> times() const;
  /// Index of the event at `t` (within the merge tolerance), if any.
  std::optional<std::size_t> find(double t) const;
};

inline constexpr double kSimultaneityTolerance = 1e-12;

/// Sorted union of the given update times and all nonnegative read times.
/// Times closer than kSimultaneityTolerance share one event. Only updates
/// with time <= horizon participate.
GlobalEventSequence merge_events(std::span<const UpdateSchedule> schedules,
                                 std::span<const ReadAnnotation> reads, double horizon);

struct WindowConstants {
  std::size_t m_check = 0;  // max events per update interval, no delays
  std::size_t m_tilde = 0;  // same bound with delays
  std::size_t m_hat = 0;    // window depth covering every delayed read
};

/// Event-count bounds for one agent's update interval and the stacked window
/// depth that covers every delayed read.
WindowConstants window_constants(std::size_t n, double tau_min, double tau_max, std::size_t K);

}  // namespace consensus
