#include "consensus/augmented.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "consensus/errors.hpp"

namespace consensus {

Matrix PiMatrix::assemble() const {
  const std::size_t n = agents();
  const std::size_t m = window();
  const double keep = std::exp(-h_);
  const double mix = -std::expm1(-h_);
  Matrix out(m * n, m * n);
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, s * n + j) = mix * blocks_[s](i, j);
  for (std::size_t i = 0; i < n; ++i) out(i, i) += keep;
  for (std::size_t r = n; r < m * n; ++r) out(r, r - n) = 1.0;
  return out;
}

StochasticMatrix PiMatrix::assemble_stochastic() const {
  return StochasticMatrix(assemble(), kStochasticTolerance);
}

std::vector<double> PiMatrix::apply(std::span<const double> z) const {
  const std::size_t n = agents();
  const std::size_t m = window();
  if (z.size() != m * n) throw std::invalid_argument("PiMatrix::apply: dimension mismatch");
  const double keep = std::exp(-h_);
  const double mix = -std::expm1(-h_);
  std::vector<double> out(m * n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
      const auto row = blocks_[s].row(i);
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * z[s * n + j];
    }
    out[i] = keep * z[i] + mix * acc;
  }
  std::copy(z.begin(), z.end() - static_cast<std::ptrdiff_t>(n), out.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

void PiMatrix::apply_left(Matrix& p) const {
  const std::size_t n = agents();
  const std::size_t m = window();
  if (p.rows() != m * n) throw std::invalid_argument("PiMatrix::apply_left: dimension mismatch");
  const std::size_t cols = p.cols();
  const double keep = std::exp(-h_);
  const double mix = -std::expm1(-h_);
  Matrix head(n, cols);
  for (std::size_t i = 0; i < n; ++i) {
    auto out = head.row(i);
    for (std::size_t s = 0; s < m; ++s) {
      const auto brow = blocks_[s].row(i);
      for (std::size_t j = 0; j < n; ++j) {
        const double w = brow[j];
        if (w == 0.0) continue;
        const auto src = p.row(s * n + j);
        for (std::size_t c = 0; c < cols; ++c) out[c] += w * src[c];
      }
    }
    const auto own = p.row(i);
    for (std::size_t c = 0; c < cols; ++c) out[c] = keep * own[c] + mix * out[c];
  }
  for (std::size_t r = m * n; r-- > n;) {
    const auto src = p.row(r - n);
    std::copy(src.begin(), src.end(), p.row(r).begin());
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto src = head.row(i);
    std::copy(src.begin(), src.end(), p.row(i).begin());
  }
}

PiMatrix build_pi(double h, std::vector<Matrix> blocks, double h_max) {
  if (!(h > 0.0) || h > h_max) throw std::invalid_argument("build_pi: h out of range");
  if (blocks.empty()) throw std::invalid_argument("build_pi: need at least one block");
  const std::size_t n = blocks.front().rows();
  Matrix sum(n, n);
  for (const auto& b : blocks) {
    if (b.rows() != n || b.cols() != n) throw std::invalid_argument("build_pi: block shape");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (b(i, j) < 0.0) throw std::invalid_argument("build_pi: negative block entry");
        sum(i, j) += b(i, j);
      }
  }
  if (!is_stochastic(sum)) throw std::invalid_argument("build_pi: blocks do not sum to a stochastic matrix");
  PiMatrix pi;
  pi.h_ = h;
  pi.blocks_ = std::move(blocks);
  return pi;
}

namespace {

// The update record each agent is following on (t_k, t_{k+1}): its latest
// update whose event index is at most k.
class ActiveUpdates {
 public:
  explicit ActiveUpdates(const RunResult& run) : by_agent_(run.n) {
    for (std::size_t i = 0; i < run.n; ++i)
      by_agent_[i].resize(run.plan.updates[i].size(), nullptr);
    for (const auto& rec : run.log) by_agent_[rec.agent][rec.update_index] = &rec;
  }

  const UpdateRecord& at(std::size_t agent, std::size_t k) const {
    const auto& recs = by_agent_[agent];
    auto it = std::upper_bound(recs.begin(), recs.end(), k,
                               [](std::size_t v, const UpdateRecord* r) { return v < r->event_index; });
    if (it == recs.begin()) throw WindowError("agent has no update before event");
    return **std::prev(it);
  }

 private:
  std::vector<std::vector<const UpdateRecord*>> by_agent_;
};

// Slot holding the value a read refers to at step k. Pre-history reads
// return nullopt; any slot >= k holds x(0) for them.
std::optional<std::size_t> read_slot(const RunResult& run, std::size_t k, double effective_time) {
  if (effective_time < 0.0) return std::nullopt;
  const auto e = run.events.find(effective_time);
  if (!e) throw WindowError("read time " + std::to_string(effective_time) + " is not an event");
  return k - *e;
}

}  // namespace

std::size_t required_window(const RunResult& run) {
  if (run.events.size() < 2) return 1;
  const ActiveUpdates active(run);
  std::size_t deepest = 0;
  for (std::size_t k = 0; k + 1 < run.events.size(); ++k) {
    for (std::size_t i = 0; i < run.n; ++i) {
      const auto& rec = active.at(i, k);
      if (rec.used.empty()) {
        deepest = std::max(deepest, k - rec.event_index);
        continue;
      }
      for (const auto& r : rec.used)
        deepest = std::max(deepest, read_slot(run, k, r.effective_time).value_or(k));
    }
  }
  return deepest + 1;
}

std::size_t guaranteed_window(const RunResult& run) {
  const auto c = window_constants(run.n, run.tau_u_min, run.tau_u_max, run.K);
  return run.delayed ? c.m_hat : c.m_check;
}

std::vector<PiMatrix> decompose_run(const RunResult& run, std::size_t m) {
  if (m == 0) throw std::invalid_argument("decompose_run: window must be >= 1");
  const std::size_t n = run.n;
  const ActiveUpdates active(run);
  std::vector<PiMatrix> out;
  if (run.events.size() < 2) return out;
  out.reserve(run.events.size() - 1);
  const double h_max = run.tau_u_max * (1.0 + 1e-12);
  for (std::size_t k = 0; k + 1 < run.events.size(); ++k) {
    std::vector<Matrix> blocks(m, Matrix(n, n));
    for (std::size_t i = 0; i < n; ++i) {
      const auto& rec = active.at(i, k);
      if (rec.used.empty()) {
        const std::size_t slot = k - rec.event_index;
        if (slot >= m)
          throw WindowError("window " + std::to_string(m) + " too small for a hold at event " +
                            std::to_string(k));
        blocks[slot](i, i) = 1.0;
        continue;
      }
      const auto weights = normalize_weights(run.graph, rec.received, i);
      for (const auto& r : rec.used) {
        const auto slot = read_slot(run, k, r.effective_time);
        const std::size_t s = slot.value_or(m - 1);
        if (s >= m || (!slot && m - 1 < k))
          throw WindowError("window " + std::to_string(m) + " too small for a read at event " +
                            std::to_string(k));
        blocks[s](i, r.neighbor) += weights[r.neighbor];
      }
    }
    out.push_back(build_pi(run.events.time(k + 1) - run.events.time(k), std::move(blocks), h_max));
  }
  return out;
}

std::vector<double> initial_window(const RunResult& run, std::size_t m) {
  std::vector<double> z;
  z.reserve(m * run.n);
  for (std::size_t s = 0; s < m; ++s) z.insert(z.end(), run.initial_state.begin(), run.initial_state.end());
  return z;
}

Matrix oracle_run(const RunResult& run, std::span<const PiMatrix> pis) {
  const std::size_t m = pis.empty() ? 1 : pis.front().window();
  Matrix out(run.events.size(), m * run.n);
  if (run.events.size() == 0) return out;
  auto z = initial_window(run, m);
  std::copy(z.begin(), z.end(), out.row(0).begin());
  for (std::size_t k = 0; k < pis.size(); ++k) {
    z = pis[k].apply(z);
    std::copy(z.begin(), z.end(), out.row(k + 1).begin());
  }
  return out;
}

Matrix oracle_run(const RunResult& run, std::size_t m) {
  const auto pis = decompose_run(run, m);
  return oracle_run(run, pis);
}

Matrix window_product(std::span<const PiMatrix> pis) {
  if (pis.empty()) throw std::invalid_argument("window_product: empty window");
  Matrix p = Matrix::identity(pis.front().dimension());
  for (const auto& pi : pis) pi.apply_left(p);
  return p;
}

ConsensusCertificate consensus_certificate(std::span<const PiMatrix> pis,
                                           std::span<const std::size_t> window_lengths) {
  ConsensusCertificate cert;
  std::size_t pos = 0;
  bool all_scrambling = !window_lengths.empty();
  for (std::size_t len : window_lengths) {
    if (len == 0 || pos + len > pis.size())
      throw std::invalid_argument("consensus_certificate: windows do not partition the sequence");
    const Matrix p = window_product(pis.subspan(pos, len));
    pos += len;
    const double overlap = row_overlap(p);
    cert.window_overlaps.push_back(overlap);
    cert.window_lambdas.push_back(1.0 - overlap);
    cert.log_bound += std::log1p(-overlap);
    if (!(overlap > 0.0)) all_scrambling = false;
  }
  cert.bound = std::exp(cert.log_bound);
  cert.certified = all_scrambling && cert.log_bound < 0.0;
  return cert;
}

std::vector<std::size_t> windows_by_duration(const GlobalEventSequence& events, double duration) {
  std::vector<std::size_t> lengths;
  std::size_t start = 0;
  for (std::size_t k = 1; k < events.size(); ++k) {
    if (events.time(k) - events.time(start) >= duration) {
      lengths.push_back(k - start);
      start = k;
    }
  }
  return lengths;
}

}  // namespace consensus
