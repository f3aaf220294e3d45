#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "consensus/dynamics.hpp"
#include "consensus/graph.hpp"
#include "consensus/scheduler.hpp"
#include "consensus/topology.hpp"

namespace consensus {

/// max_i x_i - min_i x_i. Throws std::invalid_argument on an empty vector.
double spread(std::span<const double> x);

/// Earliest event time after which the spread stays below `tol` at every
/// later event and at the horizon.
std::optional<double> detect_consensus(const RunResult& run, double tol);

struct UnionCheck {
  bool holds = true;
  std::size_t windows_checked = 0;
  std::optional<double> failing_start;  // first window [start, start + T] without a spanning tree
};

/// For every grid point t0 in [0, horizon - T], does the union of the
/// reception graphs over [t0, t0 + T] contain a spanning tree? The grid
/// should contain every update time; the run's event times do.
UnionCheck check_union_condition(const CommunicationPlan& plan, std::span<const double> grid,
                                 double T, double horizon);
UnionCheck check_union_condition(const RunResult& run, double T);

/// Blocks U_k = {t_{k e + 1}, ..., t_{(k+1) e}} of events: each must contain
/// events whose following gap is at least tau_v and whose reception graphs
/// jointly contain a spanning tree. Only complete blocks are checked.
bool check_equivalent_condition(const GlobalEventSequence& events, const CommunicationPlan& plan,
                                std::size_t epsilon, double tau_v);

/// Group decision value f^T x0 of the synchronous fixed-topology system,
/// where f is the stationary vector of e^{-1} I + (1 - e^{-1}) A for the
/// normalized weight matrix A. Throws CertificationError when that matrix
/// cannot be certified SIA (no spanning tree).
double predicted_group_value(const DirectedWeightedGraph& g, std::span<const double> x0);

struct InvariantReport {
  std::size_t containment_violations = 0;
  std::size_t window_max_violations = 0;
  std::size_t window_min_violations = 0;
  std::size_t window = 0;
};

/// Convex containment at the given sample times and monotonicity of the
/// stacked-window extremes (window depth `m`) across events. Values may
/// overshoot by at most `tol` before counting as a violation.
InvariantReport check_invariants(const RunResult& run, std::span<const double> sample_times,
                                 std::size_t m, double tol = 1e-12);

struct IntervalCounts {
  std::size_t max_count = 0;
  std::size_t bound = 0;
  std::size_t violations = 0;
  std::size_t intervals = 0;
};

/// Global events per complete update interval [t_k^i, t_{k+1}^i) versus
/// m_check (no delays) or m_tilde (with delays).
IntervalCounts check_interval_counts(const RunResult& run);

}  // namespace consensus
