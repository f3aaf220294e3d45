#include "consensus/output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "consensus/analysis.hpp"
#include "consensus/errors.hpp"

namespace consensus {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return {buf.data(), p};
}

std::vector<double> sample_times(const RunResult& run, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("sample spacing must be positive");
  std::vector<double> t = run.events.times();
  for (std::size_t k = 0;; ++k) {
    const double s = static_cast<double>(k) * dt;
    if (s > run.horizon) break;
    t.push_back(s);
  }
  t.push_back(run.horizon);
  std::sort(t.begin(), t.end());
  std::vector<double> out;
  for (double v : t)
    if (out.empty() || v - out.back() > kSimultaneityTolerance) out.push_back(v);
  return out;
}

void write_trajectories_csv(std::ostream& out, const RunResult& run, double dt) {
  out << "t";
  for (std::size_t i = 0; i < run.n; ++i) out << ",x_" << i + 1;
  out << "\n";
  for (double t : sample_times(run, dt)) {
    out << format_double(t);
    for (double v : run.state_at(t)) out << "," << format_double(v);
    out << "\n";
  }
}

void write_events_csv(std::ostream& out, const RunResult& run) {
  out << "t,agent,received_set,read_times\n";
  for (const auto& rec : run.log) {
    out << format_double(rec.time) << "," << rec.agent + 1 << ",";
    for (std::size_t r = 0; r < rec.received.size(); ++r)
      out << (r ? ";" : "") << rec.received[r] + 1;
    out << ",";
    for (std::size_t r = 0; r < rec.raw_read_times.size(); ++r)
      out << (r ? ";" : "") << format_double(rec.raw_read_times[r]);
    out << "\n";
  }
}

void write_pi_csv(const std::filesystem::path& dir, std::span<const PiMatrix> pis) {
  std::filesystem::create_directories(dir);
  for (std::size_t k = 0; k < pis.size(); ++k) {
    std::array<char, 32> name{};
    std::snprintf(name.data(), name.size(), "pi_%05zu.csv", k);
    std::ofstream f(dir / name.data());
    const Matrix m = pis[k].assemble();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) f << (j ? "," : "") << format_double(m(i, j));
      f << "\n";
    }
  }
}

RunSummary summarize(const ScenarioConfig& c, const RunResult& run) {
  RunSummary s;
  s.scenario = c.name;
  s.n = run.n;
  s.seed = c.seed;
  s.horizon = run.horizon;
  s.events = run.events.size();
  s.consensus_time = detect_consensus(run, kConsensusTolerance);
  s.final_state = run.final_state();
  s.final_spread = spread(s.final_state);
  s.final_mean = std::accumulate(s.final_state.begin(), s.final_state.end(), 0.0) /
                 static_cast<double>(run.n);
  const bool sync_fixed = c.schedule != ScheduleKind::kRandom &&
                          c.topology.kind == TopologyProcess::Kind::kFixed && !c.delayed();
  if (sync_fixed) {
    try {
      s.predicted_group_value = predicted_group_value(run.graph, run.initial_state);
    } catch (const CertificationError&) {
    }
  }
  const auto counts = check_interval_counts(run);
  s.interval_count_max = counts.max_count;
  s.interval_count_bound = counts.bound;
  s.required_window = required_window(run);
  s.guaranteed_window = guaranteed_window(run);
  return s;
}

void write_summary(std::ostream& out, const RunSummary& s) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("none"); };
  out << "scenario = " << s.scenario << "\n"
      << "n = " << s.n << "\n"
      << "seed = " << s.seed << "\n"
      << "horizon = " << format_double(s.horizon) << "\n"
      << "events = " << s.events << "\n"
      << "consensus_tolerance = " << format_double(kConsensusTolerance) << "\n"
      << "consensus_time = " << opt(s.consensus_time) << "\n"
      << "final_spread = " << format_double(s.final_spread) << "\n"
      << "final_mean = " << format_double(s.final_mean) << "\n"
      << "final_state = ";
  for (std::size_t i = 0; i < s.final_state.size(); ++i)
    out << (i ? ";" : "") << format_double(s.final_state[i]);
  out << "\n"
      << "predicted_group_value = "
      << (s.predicted_group_value ? format_double(*s.predicted_group_value) : std::string("n/a")) << "\n"
      << "interval_event_count_max = " << s.interval_count_max << "\n"
      << "interval_event_count_bound = " << s.interval_count_bound << "\n"
      << "required_window = " << s.required_window << "\n"
      << "guaranteed_window = " << s.guaranteed_window << "\n";
}

}  // namespace consensus
