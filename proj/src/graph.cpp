#include "consensus/graph.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace consensus {

namespace {

WeightBounds observed_bounds(const Matrix& w) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double v : w.data()) {
    if (v > 0.0) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi == 0.0) return {1.0, 1.0};
  return {lo, hi};
}

}  // namespace

DirectedWeightedGraph::DirectedWeightedGraph(Matrix weights)
    : DirectedWeightedGraph(weights, observed_bounds(weights)) {}

DirectedWeightedGraph::DirectedWeightedGraph(Matrix weights, WeightBounds bounds)
    : weights_(std::move(weights)), bounds_(bounds) {
  if (!weights_.square()) throw std::invalid_argument("weight matrix must be square");
  if (!(bounds_.min > 0.0) || bounds_.max < bounds_.min)
    throw std::invalid_argument("weight bounds must satisfy 0 < min <= max");
  const std::size_t n = weights_.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (weights_(i, i) != 0.0)
      throw std::invalid_argument("self-loop at vertex " + std::to_string(i + 1));
    for (std::size_t j = 0; j < n; ++j) {
      const double w = weights_(i, j);
      if (w < 0.0) throw std::invalid_argument("negative weight");
      if (w > 0.0 && (w < bounds_.min || w > bounds_.max))
        throw std::invalid_argument("weight outside bounds");
    }
  }
}

DirectedWeightedGraph DirectedWeightedGraph::empty(std::size_t n) {
  return DirectedWeightedGraph(Matrix(n, n));
}

std::vector<std::size_t> neighbors(const DirectedWeightedGraph& g, std::size_t i) {
  if (i >= g.size()) throw std::out_of_range("vertex index out of range");
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < g.size(); ++j)
    if (j != i && g.weight(i, j) > 0.0) out.push_back(j);
  return out;
}

std::vector<bool> reachable_from(const Matrix& m, std::size_t root, double eps) {
  const std::size_t n = m.rows();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{root};
  seen[root] = true;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w = 0; w < n; ++w) {
      if (!seen[w] && m(w, v) > eps) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

std::optional<std::size_t> spanning_tree_root(const Matrix& pattern, double eps) {
  for (std::size_t r = 0; r < pattern.rows(); ++r) {
    const auto seen = reachable_from(pattern, r, eps);
    if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) return r;
  }
  return std::nullopt;
}

std::optional<std::size_t> has_spanning_tree(const DirectedWeightedGraph& g) {
  return spanning_tree_root(g.weights());
}

bool strongly_connected(const DirectedWeightedGraph& g) {
  for (std::size_t r = 0; r < g.size(); ++r) {
    const auto seen = reachable_from(g.weights(), r);
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) return false;
  }
  return true;
}

DirectedWeightedGraph graph_union(std::span<const DirectedWeightedGraph> gs) {
  if (gs.empty()) throw std::invalid_argument("union of no graphs");
  const std::size_t n = gs.front().size();
  Matrix w(n, n);
  WeightBounds b = gs.front().bounds();
  for (const auto& g : gs) {
    if (g.size() != n) throw std::invalid_argument("union: mismatched vertex counts");
    b.min = std::min(b.min, g.bounds().min);
    b.max = std::max(b.max, g.bounds().max);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) w(i, j) = std::max(w(i, j), g.weight(i, j));
  }
  return DirectedWeightedGraph(std::move(w), b);
}

bool in_gamma_s(const Matrix& a, double eps) {
  if (!a.square()) throw std::invalid_argument("in_gamma_s: matrix must be square");
  for (std::size_t r = 0; r < a.rows(); ++r) {
    if (!(a(r, r) > eps)) continue;
    const auto seen = reachable_from(a, r, eps);
    if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) return true;
  }
  return false;
}

}  // namespace consensus
