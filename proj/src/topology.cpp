#include "consensus/topology.hpp"

#include <algorithm>
#include <stdexcept>

#include "consensus/rng.hpp"

namespace consensus {

TopologyProcess TopologyProcess::fixed(DirectedWeightedGraph g) {
  TopologyProcess tp;
  tp.graph_ = std::move(g);
  return tp;
}

TopologyProcess TopologyProcess::periodic(DirectedWeightedGraph g,
                                          std::vector<ReceptionRule> rules) {
  for (const auto& r : rules) {
    if (r.receiver >= g.size() || r.sender >= g.size())
      throw std::invalid_argument("reception rule names an unknown agent");
    if (r.period == 0 || r.phase >= r.period)
      throw std::invalid_argument("reception rule needs period >= 1 and phase < period");
    if (!g.has_edge(r.sender, r.receiver))
      throw std::invalid_argument("reception rule uses a channel absent from the graph");
  }
  TopologyProcess tp;
  tp.kind_ = Kind::kPeriodic;
  tp.graph_ = std::move(g);
  tp.rules_ = std::move(rules);
  return tp;
}

TopologyProcess TopologyProcess::random(DirectedWeightedGraph g, double probability,
                                        std::uint64_t seed) {
  if (!(probability >= 0.0 && probability <= 1.0))
    throw std::invalid_argument("availability probability must lie in [0, 1]");
  TopologyProcess tp;
  tp.kind_ = Kind::kRandom;
  tp.graph_ = std::move(g);
  tp.probability_ = probability;
  tp.seed_ = seed;
  return tp;
}

std::vector<std::size_t> TopologyProcess::received(std::size_t agent,
                                                   std::size_t update_index) const {
  switch (kind_) {
    case Kind::kFixed:
      return neighbors(graph_, agent);
    case Kind::kPeriodic: {
      std::vector<std::size_t> out;
      for (const auto& r : rules_)
        if (r.receiver == agent && update_index % r.period == r.phase) out.push_back(r.sender);
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }
    case Kind::kRandom: {
      std::vector<std::size_t> out;
      for (std::size_t j : neighbors(graph_, agent))
        if (rng::uniform01(seed_, rng::Purpose::kAvailability, agent, update_index, j) <
            probability_)
          out.push_back(j);
      return out;
    }
  }
  return {};
}

}  // namespace consensus

#include "consensus/scheduler.hpp"

namespace consensus {

std::optional<std::size_t> CommunicationPlan::active_update(std::size_t agent, double t) const {
  const auto& ups = updates[agent];
  auto it = std::upper_bound(ups.begin(), ups.end(), t,
                             [](double v, const PlannedUpdate& u) { return v < u.time; });
  if (it == ups.begin()) return std::nullopt;
  return static_cast<std::size_t>(it - ups.begin()) - 1;
}

Matrix CommunicationPlan::reception_pattern(double t) const {
  return reception_union(t, t);
}

Matrix CommunicationPlan::reception_union(double t0, double t1) const {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto first = active_update(i, t0);
    const auto& ups = updates[i];
    for (std::size_t k = first.value_or(0); k < ups.size() && ups[k].time <= t1; ++k)
      for (std::size_t j : ups[k].received) m(i, j) = 1.0;
  }
  return m;
}

CommunicationPlan plan_communication(std::span<const UpdateSchedule> schedules,
                                     const TopologyProcess& tp, double horizon) {
  CommunicationPlan plan;
  plan.n = schedules.size();
  plan.updates.resize(plan.n);
  for (const auto& s : schedules) {
    for (std::size_t k = 0; k < s.times.size() && s.times[k] <= horizon; ++k)
      plan.updates[s.agent].push_back({s.times[k], tp.received(s.agent, k)});
  }
  return plan;
}

}  // namespace consensus
