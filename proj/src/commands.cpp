#include "consensus/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <numeric>
#include <optional>
#include <thread>
#include <vector>

#include "consensus/analysis.hpp"
#include "consensus/augmented.hpp"
#include "consensus/builtin.hpp"
#include "consensus/config.hpp"
#include "consensus/dynamics.hpp"
#include "consensus/errors.hpp"
#include "consensus/output.hpp"

namespace consensus {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

void write_run(const fs::path& dir, const ScenarioConfig& c, const RunResult& run, bool dump_pi) {
  fs::create_directories(dir);
  auto traj = open_out(dir / "trajectories.csv");
  write_trajectories_csv(traj, run, c.sample_dt);
  auto ev = open_out(dir / "events.csv");
  write_events_csv(ev, run);
  auto sum = open_out(dir / "summary.txt");
  write_summary(sum, summarize(c, run));
  if (dump_pi) write_pi_csv(dir / "pi", decompose_run(run, required_window(run)));
}

struct BatchRow {
  std::uint64_t seed = 0;
  std::vector<double> final_state;
  double final_value = 0.0;
  double final_spread = 0.0;
  std::optional<double> consensus_time;
};

BatchRow run_seed(ScenarioConfig c, std::uint64_t seed) {
  c.seed = seed;
  const RunResult run = consensus::run(c);
  BatchRow row;
  row.seed = seed;
  row.final_state = run.final_state();
  row.final_value = std::accumulate(row.final_state.begin(), row.final_state.end(), 0.0) /
                    static_cast<double>(row.final_state.size());
  row.final_spread = spread(row.final_state);
  row.consensus_time = detect_consensus(run, kConsensusTolerance);
  return row;
}

// Seeds run concurrently; rows come back in seed order.
std::vector<BatchRow> run_batch(const ScenarioConfig& base, std::uint64_t first, std::uint64_t last) {
  const std::size_t workers = std::max(1U, std::thread::hardware_concurrency());
  std::vector<BatchRow> rows;
  for (std::uint64_t s = first; s <= last;) {
    std::vector<std::future<BatchRow>> wave;
    for (std::size_t w = 0; w < workers && s <= last; ++w, ++s)
      wave.push_back(std::async(std::launch::async, run_seed, base, s));
    for (auto& f : wave) rows.push_back(f.get());
    if (s == 0) break;  // wrapped past the largest seed
  }
  return rows;
}

double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

void write_batch(const fs::path& dir, const std::vector<BatchRow>& rows) {
  fs::create_directories(dir);
  auto summary = open_out(dir / "batch_summary.csv");
  summary << "seed,final_value,final_spread,consensus_time\n";
  for (const auto& r : rows)
    summary << r.seed << "," << format_double(r.final_value) << "," << format_double(r.final_spread)
            << "," << (r.consensus_time ? format_double(*r.consensus_time) : std::string("none")) << "\n";
  auto finals = open_out(dir / "final_values.csv");
  finals << "seed";
  const std::size_t n = rows.empty() ? 0 : rows.front().final_state.size();
  for (std::size_t i = 0; i < n; ++i) finals << ",x_" << i + 1;
  finals << "\n";
  for (const auto& r : rows) {
    finals << r.seed;
    for (double v : r.final_state) finals << "," << format_double(v);
    finals << "\n";
  }
}

class CheckList {
 public:
  explicit CheckList(std::ostream& log) : log_(log) {}

  void check(const std::string& name, bool ok, const std::string& detail) {
    log_ << "CHECK " << name << ": " << (ok ? "PASS" : "FAIL") << " (" << detail << ")\n";
    all_ok_ = all_ok_ && ok;
  }

  int status() const { return all_ok_ ? kExitOk : kExitFailed; }

 private:
  std::ostream& log_;
  bool all_ok_ = true;
};

int reproduce_fixed(const fs::path& out, std::ostream& log) {
  const auto c = builtin::example_fixed();
  const auto run = consensus::run(c);
  write_run(out / "example-fixed", c, run, false);
  CheckList checks(log);
  const auto t = detect_consensus(run, kConsensusTolerance);
  checks.check("fixed-consensus", t.has_value(),
               "spread < 1e-6 from t = " + (t ? format_double(*t) : std::string("never")));
  const auto x = run.final_state();
  const bool inside = std::all_of(x.begin(), x.end(), [](double v) { return v >= 5.0 && v <= 8.0; });
  checks.check("fixed-final-in-range", inside, "final x_1 = " + format_double(x[0]));
  const auto rows = run_batch(c, 1, 100);
  write_batch(out / "example-fixed" / "batch", rows);
  std::vector<double> finals;
  for (const auto& r : rows) finals.push_back(r.final_value);
  const double var = sample_variance(finals);
  checks.check("fixed-final-values-vary", var > 0.0, "sample variance over 100 seeds " + format_double(var));
  return checks.status();
}

int reproduce_counterexample(const fs::path& out, std::ostream& log) {
  const auto c = builtin::counterexample(30);
  const auto run = consensus::run(c);
  write_run(out / "counterexample", c, run, false);
  CheckList checks(log);
  double min_spread = INFINITY;
  for (std::size_t k = 0; k < run.events.size(); ++k)
    min_spread = std::min(min_spread, spread(run.event_states.row(k)));
  checks.check("counterexample-no-consensus", min_spread >= 1.0,
               "min spread over " + std::to_string(run.events.size()) + " events " + format_double(min_spread));
  const double expected[] = {2.0, 1.5, 1.3125};
  double err = 0.0;
  for (std::size_t k = 0; k < 3; ++k) err = std::max(err, std::abs(spread(run.event_states.row(k)) - expected[k]));
  checks.check("counterexample-recursion", err <= 1e-12, "max deviation " + format_double(err));
  return checks.status();
}

int reproduce_delay(const fs::path& out, std::ostream& log) {
  CheckList checks(log);
  const std::size_t Ks[] = {10, 50};
  const Strategy strategies[] = {Strategy::kPlain, Strategy::kMostRecentData};
  double medians[2][2] = {};
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      const auto c = builtin::example_delay(Ks[a], strategies[b], 1, 30.0);
      const auto run = consensus::run(c);
      const std::string tag = "tau_d-" + format_double(c.max_delay()) + "-" + to_string(strategies[b]);
      write_run(out / "example-delay" / tag, c, run, false);
      log << "spread at t=30 for " << tag << " (seed 1): " << format_double(spread(run.final_state())) << "\n";
      std::vector<double> spreads;
      for (const auto& r : run_batch(c, 1, 20)) spreads.push_back(r.final_spread);
      medians[a][b] = median(spreads);
      log << "median spread at t=30 over seeds 1..20 for " << tag << ": " << format_double(medians[a][b]) << "\n";
    }
  }
  for (std::size_t b = 0; b < 2; ++b)
    checks.check(std::string("delay-ordering-") + to_string(strategies[b]), medians[0][b] <= medians[1][b],
                 format_double(medians[0][b]) + " <= " + format_double(medians[1][b]));
  for (std::size_t a = 0; a < 2; ++a)
    checks.check("most-recent-data-helps-K" + std::to_string(Ks[a]), medians[a][1] <= medians[a][0],
                 format_double(medians[a][1]) + " <= " + format_double(medians[a][0]));
  return checks.status();
}

int reproduce_switching(const fs::path& out, std::ostream& log) {
  const auto c = builtin::example_switching();
  const auto run = consensus::run(c);
  write_run(out / "example-switching", c, run, false);
  CheckList checks(log);
  const double T = 8.0 * c.tau_u_max;
  const auto u = check_union_condition(run, T);
  checks.check("switching-union-condition", u.holds,
               "T = " + format_double(T) + ", windows " + std::to_string(u.windows_checked));
  const auto t = detect_consensus(run, 1e-4);
  checks.check("switching-consensus", t.has_value(),
               "spread < 1e-4 from t = " + (t ? format_double(*t) : std::string("never")));
  return checks.status();
}

}  // namespace

int run_command(const fs::path& config, const fs::path& out_dir, std::ostream& log, RunOptions opts) {
  ScenarioConfig c;
  try {
    c = load_config(config);
    apply_seed_override(c);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  const auto run = consensus::run(c);
  write_run(out_dir, c, run, opts.dump_pi);
  write_summary(log, summarize(c, run));
  return kExitOk;
}

int reproduce_command(const std::string& name, const fs::path& out_dir, std::ostream& log) {
  if (name == "example-fixed") return reproduce_fixed(out_dir, log);
  if (name == "counterexample") return reproduce_counterexample(out_dir, log);
  if (name == "example-delay") return reproduce_delay(out_dir, log);
  if (name == "example-switching") return reproduce_switching(out_dir, log);
  log << "error: unknown scenario '" << name << "'; expected one of:";
  for (const auto& n : builtin::names()) log << " " << n;
  log << "\n";
  return kExitInvalid;
}

int check_command(const fs::path& config, double T, std::ostream& log) {
  ScenarioConfig c;
  try {
    c = load_config(config);
    apply_seed_override(c);
    if (!(T > 0.0)) throw ConfigError("window T must be positive");
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  const auto run = consensus::run(c);
  const auto u = check_union_condition(run, T);
  if (u.holds) {
    log << "condition holds: every window of length " << format_double(T) << " over "
        << u.windows_checked << " starts contains a spanning tree\n";
    return kExitOk;
  }
  log << "condition fails: window [" << format_double(*u.failing_start) << ", "
      << format_double(*u.failing_start + T) << "] has no spanning tree\n";
  return kExitFailed;
}

int batch_command(const fs::path& config, std::uint64_t first, std::uint64_t last, const fs::path& out_dir,
                  std::ostream& log) {
  ScenarioConfig c;
  try {
    c = load_config(config);
    if (last < first) throw ConfigError("seed range must be ascending");
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  const auto rows = run_batch(c, first, last);
  write_batch(out_dir, rows);
  std::vector<double> finals;
  for (const auto& r : rows) finals.push_back(r.final_value);
  log << "runs = " << rows.size() << "\n"
      << "final_value_min = " << format_double(*std::min_element(finals.begin(), finals.end())) << "\n"
      << "final_value_max = " << format_double(*std::max_element(finals.begin(), finals.end())) << "\n"
      << "final_value_variance = " << format_double(sample_variance(finals)) << "\n";
  return kExitOk;
}

}  // namespace consensus
