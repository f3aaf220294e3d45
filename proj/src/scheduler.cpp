#include "consensus/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "consensus/rng.hpp"

namespace consensus {

namespace {

void check_bounds(double tau_min, double tau_max, double horizon) {
  if (!(tau_min > 0.0) || !(tau_max >= tau_min) || !std::isfinite(tau_max))
    throw std::invalid_argument("update gaps need 0 < tau_min <= tau_max");
  if (!(horizon >= 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("horizon must be finite and nonnegative");
}

std::vector<double> draw_times(double tau_min, double tau_max, std::uint64_t seed,
                               rng::Purpose purpose, std::uint64_t stream, double horizon) {
  std::vector<double> times{0.0};
  for (std::uint64_t k = 0; times.back() <= horizon; ++k) {
    const double u = rng::uniform01(seed, purpose, stream, k);
    times.push_back(times.back() + tau_min + (tau_max - tau_min) * u);
  }
  return times;
}

}  // namespace

std::vector<UpdateSchedule> generate_schedules(std::size_t n, double tau_min, double tau_max,
                                               std::uint64_t seed, double horizon) {
  check_bounds(tau_min, tau_max, horizon);
  std::vector<UpdateSchedule> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].agent = i;
    out[i].times = draw_times(tau_min, tau_max, seed, rng::Purpose::kSchedule, i, horizon);
  }
  return out;
}

std::vector<UpdateSchedule> synchronous_schedules(std::size_t n, double tau_min,
                                                  double tau_max, std::uint64_t seed,
                                                  double horizon) {
  check_bounds(tau_min, tau_max, horizon);
  const auto times = draw_times(tau_min, tau_max, seed, rng::Purpose::kSyncSchedule, 0, horizon);
  std::vector<UpdateSchedule> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {i, times};
  return out;
}

std::vector<UpdateSchedule> explicit_schedules(std::size_t n, std::span<const double> gaps,
                                               double horizon) {
  if (gaps.empty()) throw std::invalid_argument("explicit schedule needs at least one gap");
  if (std::any_of(gaps.begin(), gaps.end(), [](double g) { return !(g > 0.0); }))
    throw std::invalid_argument("explicit gaps must be positive");
  std::vector<double> times{0.0};
  for (std::size_t k = 0; times.back() <= horizon; ++k)
    times.push_back(times.back() + gaps[std::min(k, gaps.size() - 1)]);
  std::vector<UpdateSchedule> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {i, times};
  return out;
}

DelayAssignment DelayAssignment::none() { return {}; }

DelayAssignment DelayAssignment::uniform(double max_delay, std::uint64_t seed) {
  if (!(max_delay >= 0.0)) throw std::invalid_argument("max delay must be nonnegative");
  DelayAssignment d;
  d.policy_ = Policy::kUniform;
  d.max_delay_ = max_delay;
  d.seed_ = seed;
  return d;
}

DelayAssignment DelayAssignment::always_max(double max_delay) {
  if (!(max_delay >= 0.0)) throw std::invalid_argument("max delay must be nonnegative");
  DelayAssignment d;
  d.policy_ = Policy::kAlwaysMax;
  d.max_delay_ = max_delay;
  return d;
}

DelayAssignment DelayAssignment::fixed(Matrix delays) {
  if (!delays.square()) throw std::invalid_argument("delay matrix must be square");
  DelayAssignment d;
  d.policy_ = Policy::kExplicit;
  for (double v : delays.data()) {
    if (!(v >= 0.0)) throw std::invalid_argument("delays must be nonnegative");
    d.max_delay_ = std::max(d.max_delay_, v);
  }
  d.fixed_ = std::move(delays);
  return d;
}

double DelayAssignment::delay(std::size_t agent, std::size_t update_index,
                              std::size_t neighbor) const {
  switch (policy_) {
    case Policy::kNone:
      return 0.0;
    case Policy::kUniform:
      return max_delay_ * rng::uniform01(seed_, rng::Purpose::kDelay, agent, update_index, neighbor);
    case Policy::kAlwaysMax:
      return max_delay_;
    case Policy::kExplicit:
      return fixed_(agent, neighbor);
  }
  return 0.0;
}

std::vector<double> GlobalEventSequence::times() const {
  std::vector<double> t;
  t.reserve(events.size());
  for (const auto& e : events) t.push_back(e.time);
  return t;
}

std::optional<std::size_t> GlobalEventSequence::find(double t) const {
  auto it = std::lower_bound(events.begin(), events.end(), t - kSimultaneityTolerance,
                             [](const GlobalEvent& e, double v) { return e.time < v; });
  if (it != events.end() && std::abs(it->time - t) <= kSimultaneityTolerance)
    return static_cast<std::size_t>(it - events.begin());
  return std::nullopt;
}

GlobalEventSequence merge_events(std::span<const UpdateSchedule> schedules,
                                 std::span<const ReadAnnotation> reads, double horizon) {
  struct Item {
    double time;
    bool is_update;
    std::size_t agent;
    std::size_t index;  // update index, or position in `reads`
  };
  std::vector<Item> items;
  for (const auto& s : schedules)
    for (std::size_t k = 0; k < s.times.size() && s.times[k] <= horizon; ++k)
      items.push_back({s.times[k], true, s.agent, k});
  for (std::size_t r = 0; r < reads.size(); ++r)
    if (reads[r].time >= 0.0) items.push_back({reads[r].time, false, reads[r].agent, r});
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.is_update != b.is_update) return a.is_update;
    if (a.agent != b.agent) return a.agent < b.agent;
    return a.index < b.index;
  });

  GlobalEventSequence out;
  for (const auto& it : items) {
    if (out.events.empty() || it.time - out.events.back().time > kSimultaneityTolerance)
      out.events.push_back({it.time, {}, {}});
    auto& ev = out.events.back();
    if (it.is_update)
      ev.updates.push_back({it.agent, it.index});
    else
      ev.reads.push_back(reads[it.index]);
  }
  for (auto& ev : out.events)
    std::stable_sort(ev.updates.begin(), ev.updates.end(),
                     [](const UpdateAnnotation& a, const UpdateAnnotation& b) {
                       return a.agent < b.agent;
                     });
  return out;
}

WindowConstants window_constants(std::size_t n, double tau_min, double tau_max, std::size_t K) {
  if (!(tau_min > 0.0) || !(tau_max >= tau_min))
    throw std::invalid_argument("window constants need 0 < tau_min <= tau_max");
  if (n == 0) throw std::invalid_argument("window constants need n >= 1");
  // The ratio is nudged so that e.g. 0.9 / 0.3 floors to 3, not 2.
  const auto ratio = static_cast<std::size_t>(std::floor(tau_max / tau_min + 1e-9));
  WindowConstants c;
  c.m_check = (ratio + 1) * (n - 1) + 1;
  c.m_tilde = c.m_check * n * (K * (n - 1) + 1);
  c.m_hat = (K + 1) * c.m_tilde;
  return c;
}

}  // namespace consensus
