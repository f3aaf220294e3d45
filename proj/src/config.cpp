#include "consensus/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>
#include <vector>

#include "consensus/errors.hpp"
#include "consensus/output.hpp"

namespace consensus {

namespace {

struct Value {
  std::variant<std::string, std::vector<Value>> v;

  bool is_list() const { return std::holds_alternative<std::vector<Value>>(v); }
  const std::string& word() const { return std::get<std::string>(v); }
  const std::vector<Value>& list() const { return std::get<std::vector<Value>>(v); }
};

struct Entry {
  Value value;
  std::size_t line = 0;
};

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class ValueParser {
 public:
  ValueParser(std::string_view text, std::size_t line) : s_(text), line_(line) {}

  Value parse() {
    Value v = value();
    skip_ws();
    if (pos_ != s_.size()) fail(line_, "trailing characters after value");
    return v;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r'))
      ++pos_;
  }

  Value value() {
    skip_ws();
    if (pos_ >= s_.size()) fail(line_, "missing value");
    if (s_[pos_] == '[') {
      ++pos_;
      std::vector<Value> items;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == ']') {
        ++pos_;
        return {std::move(items)};
      }
      while (true) {
        items.push_back(value());
        skip_ws();
        if (pos_ >= s_.size()) fail(line_, "unterminated list");
        if (s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (s_[pos_] == ']') {
          ++pos_;
          return {std::move(items)};
        }
        fail(line_, "expected ',' or ']' in list");
      }
    }
    const auto start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '[' &&
           s_[pos_] != ' ' && s_[pos_] != '\t' && s_[pos_] != '\n')
      ++pos_;
    if (pos_ == start) fail(line_, "empty value");
    return {std::string(s_.substr(start, pos_ - start))};
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

double to_number(const Entry& e) {
  if (e.value.is_list()) fail(e.line, "expected a number");
  const auto& w = e.value.word();
  double d = 0.0;
  const auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), d);
  if (ec != std::errc() || p != w.data() + w.size()) fail(e.line, "not a number: " + w);
  return d;
}

std::uint64_t to_unsigned(const Entry& e) {
  if (e.value.is_list()) fail(e.line, "expected an integer");
  const auto& w = e.value.word();
  std::uint64_t u = 0;
  const auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), u);
  if (ec != std::errc() || p != w.data() + w.size()) fail(e.line, "not a nonnegative integer: " + w);
  return u;
}

std::vector<double> to_vector(const Entry& e) {
  if (!e.value.is_list()) fail(e.line, "expected a list");
  std::vector<double> out;
  for (const auto& item : e.value.list()) out.push_back(to_number({item, e.line}));
  return out;
}

Matrix to_matrix(const Entry& e) {
  if (!e.value.is_list()) fail(e.line, "expected a matrix as a list of rows");
  const auto& rows = e.value.list();
  if (rows.empty()) return {};
  std::vector<std::vector<double>> data;
  for (const auto& r : rows) data.push_back(to_vector({r, e.line}));
  Matrix m(data.size(), data.front().size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].size() != m.cols()) fail(e.line, "matrix rows differ in length");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = data[i][j];
  }
  return m;
}

std::string to_word(const Entry& e) {
  if (e.value.is_list()) fail(e.line, "expected a word");
  return e.value.word();
}

std::size_t to_agent(double v, std::size_t line) {
  if (v < 1.0 || v != std::floor(v)) fail(line, "agent indices are positive integers");
  return static_cast<std::size_t>(v) - 1;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string_view::npos) {
      if (line.back() != ']') fail(line_no, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    const std::string key = std::string(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    const std::size_t start_line = line_no;
    // Lists may span lines until the brackets balance.
    auto depth = [](const std::string& s) {
      long d = 0;
      for (char ch : s) d += ch == '[' ? 1 : ch == ']' ? -1 : 0;
      return d;
    };
    while (depth(value) > 0 && std::getline(in, raw)) {
      ++line_no;
      std::string_view more = raw;
      if (const auto hash = more.find('#'); hash != std::string_view::npos) more = more.substr(0, hash);
      value += ' ';
      value += trim(more);
    }
    const std::string full = section.empty() ? key : section + "." + key;
    if (entries.count(full)) fail(start_line, "duplicate key " + full);
    entries[full] = {ValueParser(value, start_line).parse(), start_line};
  }

  ScenarioConfig c;
  auto take = [&](const std::string& k) -> const Entry* {
    auto it = entries.find(k);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto need = [&](const std::string& k) -> const Entry& {
    const Entry* e = take(k);
    if (!e) throw ConfigError("missing required key " + k);
    return *e;
  };

  if (auto e = take("name")) c.name = to_word(*e);
  c.n = to_unsigned(need("agents.n"));
  c.initial_state = to_vector(need("agents.initial_state"));

  c.tau_u_min = to_number(need("timing.tau_u_min"));
  c.tau_u_max = to_number(need("timing.tau_u_max"));
  c.horizon = to_number(need("timing.horizon"));
  if (auto e = take("timing.sample_dt")) c.sample_dt = to_number(*e);
  if (auto e = take("timing.seed")) c.seed = to_unsigned(*e);
  if (auto e = take("timing.schedule")) {
    const auto w = to_word(*e);
    if (w == "random") c.schedule = ScheduleKind::kRandom;
    else if (w == "synchronous") c.schedule = ScheduleKind::kSynchronous;
    else if (w == "explicit") c.schedule = ScheduleKind::kExplicit;
    else fail(e->line, "unknown schedule " + w);
  }
  if (auto e = take("timing.gaps")) c.gaps = to_vector(*e);

  c.topology.weights = to_matrix(need("topology.weights"));
  if (auto e = take("topology.kind")) {
    const auto w = to_word(*e);
    if (w == "fixed") c.topology.kind = TopologyProcess::Kind::kFixed;
    else if (w == "periodic") c.topology.kind = TopologyProcess::Kind::kPeriodic;
    else if (w == "random") c.topology.kind = TopologyProcess::Kind::kRandom;
    else fail(e->line, "unknown topology kind " + w);
  }
  const Entry* wmin = take("topology.weight_min");
  const Entry* wmax = take("topology.weight_max");
  if ((wmin == nullptr) != (wmax == nullptr))
    throw ConfigError("weight_min and weight_max must be given together");
  if (wmin) {
    c.topology.has_bounds = true;
    c.topology.bounds = {to_number(*wmin), to_number(*wmax)};
  }
  if (auto e = take("topology.rules")) {
    if (!e->value.is_list()) fail(e->line, "rules must be a list of [receiver, sender, period, phase]");
    for (const auto& r : e->value.list()) {
      const auto v = to_vector({r, e->line});
      if (v.size() != 4) fail(e->line, "each rule needs receiver, sender, period, phase");
      if (v[2] < 1.0 || v[3] < 0.0 || v[2] != std::floor(v[2]) || v[3] != std::floor(v[3]))
        fail(e->line, "rule period and phase must be integers");
      c.topology.rules.push_back({to_agent(v[0], e->line), to_agent(v[1], e->line),
                                  static_cast<std::size_t>(v[2]), static_cast<std::size_t>(v[3])});
    }
  }
  if (auto e = take("topology.probability")) c.topology.probability = to_number(*e);

  if (auto e = take("delays.K")) c.K = to_unsigned(*e);
  if (auto e = take("delays.policy")) {
    const auto w = to_word(*e);
    if (w == "none") c.delay_policy = DelayPolicy::kNone;
    else if (w == "uniform") c.delay_policy = DelayPolicy::kUniform;
    else if (w == "explicit") c.delay_policy = DelayPolicy::kExplicit;
    else if (w == "always-max") c.delay_policy = DelayPolicy::kAlwaysMax;
    else fail(e->line, "unknown delay policy " + w);
  }
  if (auto e = take("delays.matrix")) c.delay_matrix = to_matrix(*e);
  if (auto e = take("delays.strategy")) {
    const auto w = to_word(*e);
    if (w == "plain") c.strategy = Strategy::kPlain;
    else if (w == "most-recent-data") c.strategy = Strategy::kMostRecentData;
    else fail(e->line, "unknown strategy " + w);
  }

  static const char* known[] = {
      "name",           "agents.n",          "agents.initial_state", "timing.tau_u_min",
      "timing.tau_u_max", "timing.horizon",  "timing.sample_dt",     "timing.seed",
      "timing.schedule", "timing.gaps",      "topology.weights",     "topology.kind",
      "topology.weight_min", "topology.weight_max", "topology.rules", "topology.probability",
      "delays.K",       "delays.policy",     "delays.matrix",        "delays.strategy"};
  for (const auto& [k, e] : entries) {
    bool ok = false;
    for (const char* name : known) ok = ok || k == name;
    if (!ok) fail(e.line, "unknown key " + k);
  }

  validate(c);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

namespace {

std::string format_list(std::span<const double> v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_double(v[i]);
  }
  return s + "]";
}

std::string format_matrix(const Matrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) s += ",\n  ";
    s += format_list(m.row(i));
  }
  return s + "]";
}

}  // namespace

std::string format_config(const ScenarioConfig& c) {
  std::ostringstream o;
  o << "name = " << c.name << "\n\n[agents]\n"
    << "n = " << c.n << "\n"
    << "initial_state = " << format_list(c.initial_state) << "\n\n[timing]\n"
    << "tau_u_min = " << format_double(c.tau_u_min) << "\n"
    << "tau_u_max = " << format_double(c.tau_u_max) << "\n"
    << "schedule = " << to_string(c.schedule) << "\n";
  if (c.schedule == ScheduleKind::kExplicit) o << "gaps = " << format_list(c.gaps) << "\n";
  o << "horizon = " << format_double(c.horizon) << "\n"
    << "sample_dt = " << format_double(c.sample_dt) << "\n"
    << "seed = " << c.seed << "\n\n[topology]\n"
    << "kind = " << to_string(c.topology.kind) << "\n"
    << "weights = " << format_matrix(c.topology.weights) << "\n";
  if (c.topology.has_bounds)
    o << "weight_min = " << format_double(c.topology.bounds.min) << "\n"
      << "weight_max = " << format_double(c.topology.bounds.max) << "\n";
  if (c.topology.kind == TopologyProcess::Kind::kPeriodic) {
    o << "rules = [";
    for (std::size_t r = 0; r < c.topology.rules.size(); ++r) {
      const auto& rule = c.topology.rules[r];
      o << (r ? ", " : "") << "[" << rule.receiver + 1 << ", " << rule.sender + 1 << ", "
        << rule.period << ", " << rule.phase << "]";
    }
    o << "]\n";
  }
  if (c.topology.kind == TopologyProcess::Kind::kRandom)
    o << "probability = " << format_double(c.topology.probability) << "\n";
  o << "\n[delays]\n"
    << "K = " << c.K << "\n"
    << "policy = " << to_string(c.delay_policy) << "\n";
  if (c.delay_policy == DelayPolicy::kExplicit) o << "matrix = " << format_matrix(c.delay_matrix) << "\n";
  o << "strategy = " << to_string(c.strategy) << "\n";
  return o.str();
}

void apply_seed_override(ScenarioConfig& c) {
  const char* env = std::getenv("CONSENSUS_SIM_SEED");
  if (env == nullptr || *env == '\0') return;
  std::string_view s(env);
  std::uint64_t seed = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError("CONSENSUS_SIM_SEED must be an unsigned integer");
  c.seed = seed;
}

}  // namespace consensus
