#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "consensus/augmented.hpp"
#include "consensus/dynamics.hpp"
#include "consensus/scenario.hpp"

namespace consensus {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Multiples of dt up to the horizon merged with every event time.
std::vector<double> sample_times(const RunResult& run, double dt);

/// Header `t,x_1,...,x_n`; one row per sample time.
void write_trajectories_csv(std::ostream& out, const RunResult& run, double dt);

/// Header `t,agent,received_set,read_times`; one row per update. Sets and
/// read-time lists are `;`-separated with 1-based agent indices.
void write_events_csv(std::ostream& out, const RunResult& run);

/// One file per transition, pi_00000.csv, ... holding the dense matrix.
void write_pi_csv(const std::filesystem::path& dir, std::span<const PiMatrix> pis);

struct RunSummary {
  std::string scenario;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double horizon = 0.0;
  std::size_t events = 0;
  std::optional<double> consensus_time;  // spread below 1e-6 from then on
  double final_spread = 0.0;
  double final_mean = 0.0;
  std::vector<double> final_state;
  std::optional<double> predicted_group_value;  // synchronous fixed topology only
  std::size_t interval_count_max = 0;
  std::size_t interval_count_bound = 0;
  std::size_t required_window = 0;
  std::size_t guaranteed_window = 0;
};

inline constexpr double kConsensusTolerance = 1e-6;

RunSummary summarize(const ScenarioConfig& c, const RunResult& run);

/// `key = value` lines.
void write_summary(std::ostream& out, const RunSummary& s);

}  // namespace consensus
