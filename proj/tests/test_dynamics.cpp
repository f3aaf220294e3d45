#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "consensus/analysis.hpp"
#include "consensus/augmented.hpp"
#include "consensus/builtin.hpp"
#include "consensus/dynamics.hpp"
#include "consensus/errors.hpp"
#include "consensus/output.hpp"
#include "support.hpp"

using namespace consensus;

namespace {

const Matrix kReference = {{0, 1, 1, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}};

// Integrates dx/dt = u - x with classical RK4 (step <= 1e-3) between every
// update and read time, given the piecewise-constant targets in the log.
// Returns each agent's value at every knot.
std::vector<std::map<double, double>> rk4_knots(const RunResult& run) {
  std::set<double> knots{0.0, run.horizon};
  std::vector<std::vector<std::pair<double, double>>> targets(run.n);
  for (const auto& rec : run.log) {
    knots.insert(rec.time);
    for (const auto& r : rec.used)
      if (r.read_time > 0.0) knots.insert(r.read_time);
    targets[rec.agent].push_back({rec.time, rec.target});
  }
  std::vector<std::map<double, double>> out(run.n);
  for (std::size_t i = 0; i < run.n; ++i) {
    auto& tg = targets[i];
    std::sort(tg.begin(), tg.end());
    double x = run.initial_state[i];
    std::size_t active = 0;
    double prev = 0.0;
    out[i][0.0] = x;
    for (double knot : knots) {
      if (knot <= prev) continue;
      while (active + 1 < tg.size() && tg[active + 1].first <= prev) ++active;
      const double u = tg[active].second;
      const auto steps = static_cast<std::size_t>(std::ceil((knot - prev) / 1e-3));
      const double h = (knot - prev) / static_cast<double>(steps);
      for (std::size_t s = 0; s < steps; ++s) {
        const double k1 = u - x;
        const double k2 = u - (x + 0.5 * h * k1);
        const double k3 = u - (x + 0.5 * h * k2);
        const double k4 = u - (x + h * k3);
        x += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      }
      out[i][knot] = x;
      prev = knot;
    }
  }
  return out;
}

double knot_value(const std::map<double, double>& m, double t, double x0) {
  return t <= 0.0 ? x0 : m.at(t);
}

}  // namespace

TEST_CASE("segment closed form") {
  const Segment s{0.0, 1.0, 1.0, -1.0};
  CHECK(s.value_at(std::log(2.0)) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(s.value_at(0.0) == 1.0);
  const Segment flat{2.0, 3.0, 4.0, 4.0};
  CHECK(flat.value_at(2.7) == 4.0);
  const Segment later{1.5, 2.5, 0.3, 7.0};
  CHECK(later.value_at(1.5) == 0.3);
}

TEST_CASE("trajectory bookkeeping") {
  AgentTrajectory tr(2.0);
  CHECK(evaluate(tr, 0.0) == 2.0);
  CHECK(evaluate(tr, -3.0) == 2.0);
  CHECK_THROWS_AS(evaluate(tr, 0.5), std::out_of_range);
  CHECK_THROWS_AS(tr.append({0.1, 1.0, 2.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(tr.append({0.0, 1.0, 2.5, 0.0}), std::invalid_argument);
  tr.append({0.0, 1.0, 2.0, 0.0});
  CHECK_THROWS_AS(tr.append({1.0, 2.0, 2.0, 0.0}), std::invalid_argument);
  tr.append({1.0, 2.0, 2.0 * std::exp(-1.0), 5.0});
  CHECK(evaluate(tr, 1.0) == 2.0 * std::exp(-1.0));
  CHECK(evaluate(tr, 0.5) == doctest::Approx(2.0 * std::exp(-0.5)).epsilon(1e-15));
  CHECK_THROWS_AS(evaluate(tr, 2.0001), std::out_of_range);
}

TEST_CASE("one agent step averages what it received") {
  const DirectedWeightedGraph g(kReference);
  const ReadRecord only[] = {{1, 0.0, 5.0, 0.0, 0}};
  CHECK(step_agent(0, only, g) == 5.0);
  const ReadRecord both[] = {{1, 0.0, 6.0, 0.0, 0}, {2, 0.0, 7.0, 0.0, 0}};
  CHECK(step_agent(0, both, g) == 6.5);
  CHECK_FALSE(step_agent(0, std::span<const ReadRecord>{}, g).has_value());
  const ReadRecord bad[] = {{3, 0.0, 1.0, 0.0, 0}};
  CHECK_THROWS_AS(step_agent(0, bad, g), InvalidReception);
}

TEST_CASE("most-recent-data filter") {
  const ReadRecord one[] = {{1, 0.3, 2.0, 0.3, 0}};
  CHECK(most_recent_data_filter(one).value == 2.0);
  const ReadRecord two[] = {{1, 1.0, 2.0, 1.0, 0}, {1, 0.5, 3.0, 0.5, 1}};
  CHECK(most_recent_data_filter(two).effective_time == 1.0);
  const ReadRecord tie[] = {{1, 1.0, 2.0, 1.0, 0}, {1, 1.0, 2.0, 1.0, 1}};
  CHECK(most_recent_data_filter(tie).update_index == 1);
  CHECK_THROWS_AS(most_recent_data_filter(std::span<const ReadRecord>{}), std::invalid_argument);

  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<ReadRecord> h;
    for (std::size_t k = 0; k < 1 + t % 50; ++k) {
      const double eff = std::floor(u(gen) * 4.0) / 4.0;
      h.push_back({0, eff, u(gen), eff, k});
    }
    std::size_t best = 0;
    for (std::size_t k = 0; k < h.size(); ++k)
      if (h[k].effective_time >= h[best].effective_time) best = k;
    CHECK(most_recent_data_filter(h).update_index == h[best].update_index);
  }
}

TEST_CASE("agreement is an equilibrium") {
  auto c = builtin::example_fixed(4, 20.0);
  c.initial_state = {3.25, 3.25, 3.25, 3.25};
  const auto run = consensus::run(c);
  for (std::size_t k = 0; k < run.events.size(); ++k)
    for (double v : run.event_states.row(k)) CHECK(std::abs(v - 3.25) <= 1e-14);
}

TEST_CASE("counterexample stays antisymmetric and never agrees") {
  const auto run = consensus::run(builtin::counterexample(30));
  const double expected[] = {2.0, 1.5, 1.3125};
  for (std::size_t k = 0; k < run.events.size(); ++k) {
    CHECK(std::abs(run.event_states(k, 0) + run.event_states(k, 1)) <= 1e-15);
    const double gap = std::abs(run.event_states(k, 0) - run.event_states(k, 1));
    CHECK(gap >= 1.0);
    if (k < 3) CHECK(gap == doctest::Approx(expected[k]).epsilon(1e-12));
  }
}

TEST_CASE("reference network agrees asynchronously") {
  const auto run = consensus::run(builtin::example_fixed(1, 100.0));
  const auto x = run.final_state();
  CHECK(spread(x) < 1e-6);
  for (double v : x) {
    CHECK(v >= 5.0);
    CHECK(v <= 8.0);
  }
}

TEST_CASE("closed-form trajectories match an RK4 integration") {
  std::mt19937_64 gen(101);
  for (int t = 0; t < 12; ++t) {
    const auto c = testing::random_config(gen, {4, 5, true, 8.0});
    const auto run = consensus::run(c);
    const auto knots = rk4_knots(run);
    double worst_state = 0.0;
    double worst_target = 0.0;
    for (std::size_t i = 0; i < run.n; ++i)
      for (const auto& [time, value] : knots[i])
        worst_state = std::max(worst_state, std::abs(evaluate(run.trajectories[i], time) - value));
    for (const auto& rec : run.log) {
      if (rec.used.empty()) {
        CHECK(rec.target == rec.start_value);
        continue;
      }
      const auto w = normalize_weights(run.graph, rec.received, rec.agent);
      double u = 0.0;
      for (const auto& r : rec.used)
        u += w[r.neighbor] * knot_value(knots[r.neighbor], r.read_time, run.initial_state[r.neighbor]);
      worst_target = std::max(worst_target, std::abs(u - rec.target));
    }
    CHECK(worst_state <= 1e-8);
    CHECK(worst_target <= 1e-8);
  }
}

TEST_CASE("reads before time zero see the initial state") {
  auto c = builtin::example_delay(10, Strategy::kPlain, 2, 3.0);
  c.delay_policy = DelayPolicy::kAlwaysMax;
  const auto run = consensus::run(c);
  std::size_t early = 0;
  for (const auto& rec : run.log)
    for (const auto& r : rec.used)
      if (r.read_time < 0.0) {
        ++early;
        CHECK(r.value == run.initial_state[r.neighbor]);
      }
  CHECK(early > 0);
}

TEST_CASE("most-recent-data never goes back in time") {
  const auto run = consensus::run(builtin::example_delay(50, Strategy::kMostRecentData, 3, 30.0));
  std::map<std::pair<std::size_t, std::size_t>, double> latest;
  std::size_t replaced = 0;
  for (const auto& rec : run.log)
    for (std::size_t r = 0; r < rec.used.size(); ++r) {
      const auto key = std::make_pair(rec.agent, rec.used[r].neighbor);
      if (latest.count(key)) CHECK(rec.used[r].effective_time >= latest[key]);
      latest[key] = rec.used[r].effective_time;
      if (rec.used[r].effective_time != rec.raw_read_times[r]) ++replaced;
    }
  CHECK(replaced > 0);
}

TEST_CASE("processing order of simultaneous updates does not matter") {
  std::mt19937_64 gen(7);
  for (int t = 0; t < 20; ++t) {
    auto c = testing::random_config(gen, {5, 3, true, 10.0});
    c.schedule = ScheduleKind::kSynchronous;
    validate(c);
    SimulationInput in{make_topology(c), make_schedules(c), make_delays(c), c.strategy, c.initial_state,
                       c.horizon,        c.K,               c.tau_u_min,    c.tau_u_max, TieOrder::kAscendingAgent};
    const auto a = simulate(in);
    in.ties = TieOrder::kDescendingAgent;
    const auto b = simulate(in);
    CHECK(a.event_states == b.event_states);
  }
}

TEST_CASE("states stay in the initial hull and window extremes contract") {
  std::mt19937_64 gen(19);
  for (int t = 0; t < 30; ++t) {
    const auto run = consensus::run(testing::random_config(gen, {5, 5, true, 15.0}));
    const auto rep = check_invariants(run, sample_times(run, 0.01), required_window(run));
    CHECK(rep.containment_violations == 0);
    CHECK(rep.window_max_violations == 0);
    CHECK(rep.window_min_violations == 0);
  }
}

TEST_CASE("scaling every weight leaves trajectories unchanged") {
  std::mt19937_64 gen(23);
  for (int t = 0; t < 20; ++t) {
    auto c = testing::random_config(gen, {5, 3, true, 10.0});
    const auto a = consensus::run(c);
    for (double& w : std::span<double>(&c.topology.weights(0, 0), c.n * c.n)) w *= 3.7;
    const auto b = consensus::run(c);
    CHECK(max_abs_diff(a.event_states, b.event_states) <= 1e-12);
  }
}

TEST_CASE("horizon zero keeps the initial state") {
  auto c = builtin::example_fixed(1, 0.0);
  const auto run = consensus::run(c);
  CHECK(run.final_state() == c.initial_state);
  CHECK(run.events.size() == 1);
}

TEST_CASE("invalid scenarios are rejected before simulating") {
  auto c = builtin::example_fixed();
  c.initial_state.pop_back();
  CHECK_THROWS_AS(consensus::run(c), ConfigError);
  c = builtin::example_fixed();
  c.tau_u_max = 0.1;
  CHECK_THROWS_AS(consensus::run(c), ConfigError);
}
