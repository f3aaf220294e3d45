#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "consensus/graph.hpp"
#include "consensus/scheduler.hpp"
#include "consensus/topology.hpp"

using namespace consensus;

TEST_CASE("equal gap bounds give a regular grid") {
  const auto s = generate_schedules(2, 1.0, 1.0, 7, 4.5);
  REQUIRE(s.size() == 2);
  CHECK(s[0].times == std::vector<double>{0, 1, 2, 3, 4, 5});
  CHECK(s[1].agent == 1);
}

TEST_CASE("random gaps stay within bounds and cover the horizon") {
  const auto s = generate_schedules(3, 0.2, 0.9, 99, 5000.0);
  for (const auto& sched : s) {
    CHECK(sched.times.front() == 0.0);
    CHECK(sched.times.back() > 5000.0);
    CHECK(sched.times[sched.times.size() - 2] <= 5000.0);
    double lo = INFINITY;
    double hi = 0.0;
    for (std::size_t k = 1; k < sched.times.size(); ++k) {
      const double gap = sched.times[k] - sched.times[k - 1];
      CHECK(gap >= 0.2 - 1e-12);
      CHECK(gap <= 0.9 + 1e-12);
      lo = std::min(lo, gap);
      hi = std::max(hi, gap);
    }
    // Thousands of uniform draws reach close to both ends.
    CHECK(lo < 0.21);
    CHECK(hi > 0.89);
  }
}

TEST_CASE("schedules are reproducible and per-agent streams are independent of n") {
  const auto a = generate_schedules(3, 0.2, 0.9, 5, 50.0);
  const auto b = generate_schedules(3, 0.2, 0.9, 5, 50.0);
  const auto c = generate_schedules(5, 0.2, 0.9, 5, 50.0);
  const auto d = generate_schedules(3, 0.2, 0.9, 6, 50.0);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a[i].times == b[i].times);
    CHECK(a[i].times == c[i].times);
    CHECK(a[i].times != d[i].times);
  }
  CHECK(a[0].times != a[1].times);
}

TEST_CASE("schedule generation rejects bad bounds") {
  CHECK_THROWS_AS(generate_schedules(2, 0.0, 1.0, 1, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(generate_schedules(2, 1.0, 0.5, 1, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(generate_schedules(2, 0.5, 1.0, 1, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(explicit_schedules(2, std::vector<double>{}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(explicit_schedules(2, std::vector<double>{1.0, -1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("synchronous and explicit schedules share times across agents") {
  const auto s = synchronous_schedules(4, 0.2, 0.9, 3, 20.0);
  for (const auto& sched : s) CHECK(sched.times == s[0].times);
  const auto e = explicit_schedules(2, std::vector<double>{1.0, 2.0}, 6.0);
  CHECK(e[0].times == std::vector<double>{0, 1, 3, 5, 7});
  CHECK(e[1].times == e[0].times);
}

TEST_CASE("delay policies") {
  CHECK(DelayAssignment::none().delay(0, 3, 1) == 0.0);
  CHECK(DelayAssignment::always_max(0.4).delay(2, 9, 0) == 0.4);
  const auto d = DelayAssignment::uniform(2.0, 11);
  double hi = 0.0;
  for (std::size_t k = 0; k < 5000; ++k) {
    const double v = d.delay(1, k, 0);
    CHECK(v >= 0.0);
    CHECK(v <= 2.0);
    CHECK(v == d.delay(1, k, 0));
    hi = std::max(hi, v);
  }
  CHECK(hi > 1.99);
  CHECK(d.delay(1, 0, 0) != d.delay(0, 0, 1));
  const auto f = DelayAssignment::fixed(Matrix{{0, 0.3}, {0.1, 0}});
  CHECK(f.delay(0, 17, 1) == 0.3);
  CHECK(f.max_delay() == 0.3);
  CHECK_THROWS_AS(DelayAssignment::fixed(Matrix{{0, -0.3}, {0.1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(DelayAssignment::uniform(-1.0, 1), std::invalid_argument);
}

TEST_CASE("simultaneous updates share one event") {
  const auto s = explicit_schedules(2, std::vector<double>{1.0}, 3.0);
  const auto ev = merge_events(s, {}, 3.0);
  REQUIRE(ev.size() == 4);
  CHECK(ev.times() == std::vector<double>{0, 1, 2, 3});
  CHECK(ev.events[1].updates.size() == 2);
  CHECK(ev.events[1].updates[0].agent == 0);
  CHECK(ev.events[1].updates[1].update_index == 1);
}

TEST_CASE("event sequence is the sorted union of updates and reads") {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> u(-1.0, 30.0);
  for (int t = 0; t < 50; ++t) {
    const auto s = generate_schedules(3, 0.3, 1.1, gen(), 25.0);
    std::vector<ReadAnnotation> reads;
    for (int r = 0; r < 40; ++r) reads.push_back({static_cast<std::size_t>(r % 3), 0, 0, u(gen)});
    const auto ev = merge_events(s, reads, 25.0);
    std::set<double> expect;
    for (const auto& sched : s)
      for (double v : sched.times)
        if (v <= 25.0) expect.insert(v);
    for (const auto& r : reads)
      if (r.time >= 0.0) expect.insert(r.time);
    CHECK(ev.times() == std::vector<double>(expect.begin(), expect.end()));
    std::size_t updates = 0;
    std::size_t read_count = 0;
    for (std::size_t k = 0; k < ev.size(); ++k) {
      if (k > 0) CHECK(ev.time(k) > ev.time(k - 1));
      for (const auto& a : ev.events[k].updates) CHECK(s[a.agent].times[a.update_index] == ev.time(k));
      for (const auto& r : ev.events[k].reads) CHECK(r.time == ev.time(k));
      updates += ev.events[k].updates.size();
      read_count += ev.events[k].reads.size();
      CHECK(ev.find(ev.time(k)) == std::optional<std::size_t>(k));
    }
    CHECK(read_count == static_cast<std::size_t>(std::count_if(
                            reads.begin(), reads.end(), [](const ReadAnnotation& r) { return r.time >= 0.0; })));
    CHECK(updates > 0);
  }
}

TEST_CASE("event lookup tolerates rounding only") {
  const auto s = explicit_schedules(1, std::vector<double>{0.1}, 1.0);
  const auto ev = merge_events(s, {}, 1.0);
  CHECK(ev.find(0.30000000000000004).has_value());
  CHECK_FALSE(ev.find(0.35).has_value());
}

TEST_CASE("window constants") {
  CHECK(window_constants(4, 0.2, 0.9, 0).m_check == 16);
  CHECK(window_constants(2, 1.0, 1.0, 0).m_check == 3);
  CHECK(window_constants(4, 0.3, 0.9, 0).m_check == 13);
  const auto k0 = window_constants(3, 0.2, 0.5, 0);
  CHECK(k0.m_check == 7);
  CHECK(k0.m_tilde == 21);
  CHECK(k0.m_hat == 21);
  const auto k10 = window_constants(4, 0.2, 0.9, 10);
  CHECK(k10.m_tilde == 16 * 4 * 31);
  CHECK(k10.m_hat == 11 * 16 * 4 * 31);
  CHECK_THROWS_AS(window_constants(0, 0.2, 0.9, 0), std::invalid_argument);
  CHECK_THROWS_AS(window_constants(2, 0.9, 0.2, 0), std::invalid_argument);
}

TEST_CASE("topology processes") {
  const DirectedWeightedGraph g(Matrix{{0, 1, 1}, {1, 0, 0}, {0, 1, 0}});
  const auto fixed = TopologyProcess::fixed(g);
  CHECK(fixed.received(0, 5) == std::vector<std::size_t>{1, 2});
  const auto periodic = TopologyProcess::periodic(g, {{0, 1, 2, 0}, {0, 2, 2, 1}, {1, 0, 1, 0}});
  CHECK(periodic.received(0, 0) == std::vector<std::size_t>{1});
  CHECK(periodic.received(0, 3) == std::vector<std::size_t>{2});
  CHECK(periodic.received(1, 7) == std::vector<std::size_t>{0});
  CHECK(periodic.received(2, 0).empty());
  CHECK_THROWS_AS(TopologyProcess::periodic(g, {{2, 0, 1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(TopologyProcess::periodic(g, {{0, 1, 0, 0}}), std::invalid_argument);
  const auto random = TopologyProcess::random(g, 0.5, 3);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < 2000; ++k) {
    const auto r = random.received(0, k);
    CHECK(r == random.received(0, k));
    for (std::size_t j : r) CHECK(g.has_edge(j, 0));
    hits += r.size();
  }
  CHECK(hits > 1800);
  CHECK(hits < 2200);
}

TEST_CASE("communication plan answers active updates and unions") {
  const DirectedWeightedGraph g(Matrix{{0, 1}, {1, 0}});
  const auto tp = TopologyProcess::periodic(g, {{0, 1, 2, 0}, {1, 0, 2, 1}});
  const auto s = explicit_schedules(2, std::vector<double>{1.0}, 4.0);
  const auto plan = plan_communication(s, tp, 4.0);
  CHECK(plan.active_update(0, 0.5) == std::optional<std::size_t>(0));
  CHECK(plan.active_update(0, 1.0) == std::optional<std::size_t>(1));
  CHECK(plan.reception_pattern(0.0)(0, 1) > 0.0);
  CHECK(plan.reception_pattern(0.0)(1, 0) == 0.0);
  CHECK(plan.reception_pattern(1.5)(1, 0) > 0.0);
  // Active at 0.5 is the update at 0; the union then reaches the one at 1.
  const Matrix u = plan.reception_union(0.5, 1.0);
  CHECK(u(0, 1) > 0.0);
  CHECK(u(1, 0) > 0.0);
  const Matrix only = plan.reception_union(0.0, 0.5);
  CHECK(only(1, 0) == 0.0);
}
