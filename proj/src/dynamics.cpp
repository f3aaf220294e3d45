#include "consensus/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "consensus/errors.hpp"

namespace consensus {

double Segment::value_at(double t) const {
  // -expm1(-h) is exactly 0 at h = 0, so the start value is reproduced bit for bit.
  return x_start + (target - x_start) * -std::expm1(-(t - t_start));
}

void AgentTrajectory::append(const Segment& s) {
  if (!(s.t_end >= s.t_start)) throw std::invalid_argument("segment ends before it starts");
  const double expected_start = segments_.empty() ? 0.0 : segments_.back().t_end;
  if (s.t_start != expected_start) throw std::invalid_argument("segments must tile time");
  const double expected_x = segments_.empty() ? initial_ : segments_.back().value_at(s.t_start);
  if (std::abs(s.x_start - expected_x) > 1e-9 * std::max(1.0, std::abs(expected_x)))
    throw std::invalid_argument("segment breaks continuity");
  segments_.push_back(s);
}

double evaluate(const AgentTrajectory& tr, double t) {
  if (t <= 0.0) return tr.initial();
  const auto& segs = tr.segments();
  if (segs.empty() || t > segs.back().t_end)
    throw std::out_of_range("evaluate: time " + std::to_string(t) + " beyond simulated horizon");
  auto it = std::upper_bound(segs.begin(), segs.end(), t,
                             [](double v, const Segment& s) { return v < s.t_start; });
  return std::prev(it)->value_at(t);
}

ReadRecord most_recent_data_filter(std::span<const ReadRecord> history) {
  if (history.empty()) throw std::invalid_argument("most_recent_data_filter: empty history");
  const ReadRecord* best = &history.front();
  for (const auto& r : history.subspan(1)) {
    if (r.effective_time > best->effective_time ||
        (r.effective_time == best->effective_time && r.update_index > best->update_index))
      best = &r;
  }
  return *best;
}

std::optional<double> step_agent(std::size_t i, std::span<const ReadRecord> reads,
                                 const DirectedWeightedGraph& g) {
  if (reads.empty()) return std::nullopt;
  std::vector<std::size_t> received;
  received.reserve(reads.size());
  for (const auto& r : reads) received.push_back(r.neighbor);
  const auto row = normalize_weights(g, received, i);
  double u = 0.0;
  for (const auto& r : reads) u += row[r.neighbor] * r.value;
  return u;
}

std::vector<double> RunResult::state_at(double t) const {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = evaluate(trajectories[i], t);
  return x;
}

RunResult simulate(const SimulationInput& in) {
  const std::size_t n = in.initial_state.size();
  if (in.schedules.size() != n || in.topology.graph().size() != n)
    throw std::invalid_argument("simulate: agent counts disagree");

  RunResult res;
  res.n = n;
  res.horizon = in.horizon;
  res.delayed = in.delays.policy() != DelayAssignment::Policy::kNone;
  res.K = in.K;
  res.tau_u_min = in.tau_u_min;
  res.tau_u_max = in.tau_u_max;
  res.strategy = in.strategy;
  res.initial_state = in.initial_state;
  res.graph = in.topology.graph();
  res.schedules = in.schedules;
  res.plan = plan_communication(in.schedules, in.topology, in.horizon);

  // Reads depend only on schedules, topology and delays, so the whole event
  // structure is known before any state is computed.
  std::vector<ReadAnnotation> annotations;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ups = res.plan.updates[i];
    for (std::size_t k = 0; k < ups.size(); ++k)
      for (std::size_t j : ups[k].received)
        annotations.push_back({i, j, k, ups[k].time - in.delays.delay(i, k, j)});
  }
  res.events = merge_events(in.schedules, annotations, in.horizon);

  struct Pending {
    double time;
    std::size_t agent;
    std::size_t k;
  };
  std::vector<Pending> order;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < res.plan.updates[i].size(); ++k)
      order.push_back({res.plan.updates[i][k].time, i, k});
  const bool ascending = in.ties == TieOrder::kAscendingAgent;
  std::sort(order.begin(), order.end(), [ascending](const Pending& a, const Pending& b) {
    if (a.time != b.time) return a.time < b.time;
    return ascending ? a.agent < b.agent : a.agent > b.agent;
  });

  res.trajectories.reserve(n);
  for (double x0 : in.initial_state) res.trajectories.emplace_back(x0);
  std::vector<std::vector<std::optional<ReadRecord>>> freshest(
      n, std::vector<std::optional<ReadRecord>>(n));
  const auto& graph = res.graph;

  for (const auto& p : order) {
    const auto& planned = res.plan.updates[p.agent][p.k];
    UpdateRecord rec;
    rec.agent = p.agent;
    rec.update_index = p.k;
    rec.time = p.time;
    rec.event_index = res.events.find(p.time).value();
    rec.received = planned.received;
    for (std::size_t j : planned.received) {
      const double read_time = p.time - in.delays.delay(p.agent, p.k, j);
      ReadRecord raw{j, read_time, evaluate(res.trajectories[j], read_time), read_time, p.k};
      rec.raw_read_times.push_back(read_time);
      if (in.strategy == Strategy::kMostRecentData) {
        auto& slot = freshest[p.agent][j];
        if (slot) {
          const ReadRecord pair[] = {*slot, raw};
          raw = most_recent_data_filter(pair);
        }
        slot = raw;
      }
      rec.used.push_back(raw);
    }
    auto& tr = res.trajectories[p.agent];
    rec.start_value = evaluate(tr, p.time);
    rec.target = step_agent(p.agent, rec.used, graph).value_or(rec.start_value);
    const auto& times = in.schedules[p.agent].times;
    const double next = p.k + 1 < times.size() ? times[p.k + 1] : in.horizon;
    tr.append({p.time, std::min(next, in.horizon), rec.start_value, rec.target});
    res.log.push_back(std::move(rec));
  }

  res.event_states = Matrix(res.events.size(), n);
  for (std::size_t k = 0; k < res.events.size(); ++k)
    for (std::size_t i = 0; i < n; ++i)
      res.event_states(k, i) = evaluate(res.trajectories[i], res.events.time(k));
  return res;
}

RunResult run(const ScenarioConfig& c) {
  validate(c);
  SimulationInput in{make_topology(c), make_schedules(c), make_delays(c), c.strategy,
                     c.initial_state,  c.horizon,         c.K,            c.tau_u_min,
                     c.tau_u_max,      TieOrder::kAscendingAgent};
  return simulate(in);
}

}  // namespace consensus
