#include "consensus/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "consensus/errors.hpp"

namespace consensus {

double spread(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("spread of an empty state");
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return *hi - *lo;
}

std::optional<double> detect_consensus(const RunResult& run, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("detect_consensus: tol must be positive");
  if (run.events.size() == 0) return std::nullopt;
  if (spread(run.final_state()) >= tol) return std::nullopt;
  for (std::size_t k = run.events.size(); k-- > 0;) {
    if (spread(run.event_states.row(k)) >= tol)
      return k + 1 < run.events.size() ? std::optional(run.events.time(k + 1)) : std::nullopt;
  }
  return run.events.time(0);
}

UnionCheck check_union_condition(const CommunicationPlan& plan, std::span<const double> grid,
                                 double T, double horizon) {
  if (!(T > 0.0)) throw std::invalid_argument("check_union_condition: T must be positive");
  UnionCheck out;
  for (double t0 : grid) {
    if (t0 + T > horizon) break;
    ++out.windows_checked;
    if (!spanning_tree_root(plan.reception_union(t0, t0 + T))) {
      out.holds = false;
      out.failing_start = t0;
      return out;
    }
  }
  return out;
}

UnionCheck check_union_condition(const RunResult& run, double T) {
  const auto grid = run.events.times();
  return check_union_condition(run.plan, grid, T, run.horizon);
}

bool check_equivalent_condition(const GlobalEventSequence& events, const CommunicationPlan& plan,
                                std::size_t epsilon, double tau_v) {
  if (epsilon == 0 || !(tau_v > 0.0))
    throw std::invalid_argument("check_equivalent_condition: need epsilon >= 1 and tau_v > 0");
  const std::size_t n = plan.n;
  // U_k ends at index (k+1)e, whose following gap must exist.
  for (std::size_t k = 0; (k + 1) * epsilon + 1 < events.size(); ++k) {
    Matrix joint(n, n);
    for (std::size_t s = k * epsilon + 1; s <= (k + 1) * epsilon; ++s) {
      if (events.time(s + 1) - events.time(s) < tau_v) continue;
      const Matrix g = plan.reception_pattern(events.time(s));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) joint(i, j) = std::max(joint(i, j), g(i, j));
    }
    if (!spanning_tree_root(joint)) return false;
  }
  return true;
}

double predicted_group_value(const DirectedWeightedGraph& g, std::span<const double> x0) {
  if (x0.size() != g.size()) throw std::invalid_argument("predicted_group_value: size mismatch");
  const StochasticMatrix a = normalized_matrix(g);
  const std::size_t n = a.size();
  const double keep = std::exp(-1.0);
  Matrix step(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) step(i, j) = (1.0 - keep) * a(i, j) + (i == j ? keep : 0.0);
  const StochasticMatrix lazy(std::move(step));
  if (!is_sia(lazy)) throw CertificationError("predicted_group_value: matrix not certified SIA");
  const auto f = stationary_vector(lazy);
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) value += f[i] * x0[i];
  return value;
}

InvariantReport check_invariants(const RunResult& run, std::span<const double> sample_times,
                                 std::size_t m, double tol) {
  InvariantReport rep;
  rep.window = m;
  const double lo = *std::min_element(run.initial_state.begin(), run.initial_state.end());
  const double hi = *std::max_element(run.initial_state.begin(), run.initial_state.end());
  for (double t : sample_times)
    for (double v : run.state_at(t))
      if (v < lo - tol || v > hi + tol) ++rep.containment_violations;

  if (m == 0 || run.events.size() == 0) return rep;
  // Window k covers events k-m+1..k; indices below zero are the initial state.
  const std::size_t total = run.events.size();
  double prev_max = 0.0;
  double prev_min = 0.0;
  for (std::size_t k = 0; k < total; ++k) {
    double wmax = -INFINITY;
    double wmin = INFINITY;
    const std::size_t first = k + 1 >= m ? k + 1 - m : 0;
    for (std::size_t e = first; e <= k; ++e)
      for (double v : run.event_states.row(e)) {
        wmax = std::max(wmax, v);
        wmin = std::min(wmin, v);
      }
    if (k + 1 < m) {
      wmax = std::max(wmax, hi);
      wmin = std::min(wmin, lo);
    }
    if (k > 0) {
      if (wmax > prev_max + tol) ++rep.window_max_violations;
      if (wmin < prev_min - tol) ++rep.window_min_violations;
    }
    prev_max = wmax;
    prev_min = wmin;
  }
  return rep;
}

IntervalCounts check_interval_counts(const RunResult& run) {
  const auto c = window_constants(run.n, run.tau_u_min, run.tau_u_max, run.K);
  IntervalCounts out;
  out.bound = run.delayed ? c.m_tilde : c.m_check;
  const auto times = run.events.times();
  for (const auto& s : run.schedules) {
    for (std::size_t k = 0; k + 1 < s.times.size() && s.times[k + 1] <= run.horizon; ++k) {
      const auto first = std::lower_bound(times.begin(), times.end(), s.times[k] - kSimultaneityTolerance);
      const auto last = std::lower_bound(times.begin(), times.end(), s.times[k + 1] - kSimultaneityTolerance);
      const auto count = static_cast<std::size_t>(last - first);
      ++out.intervals;
      out.max_count = std::max(out.max_count, count);
      if (count > out.bound) ++out.violations;
    }
  }
  return out;
}

}  // namespace consensus
