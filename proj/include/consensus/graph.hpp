#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "consensus/matrix.hpp"

namespace consensus {

struct WeightBounds {
  double min = 0.0;
  double max = 0.0;
};

/// Directed graph on vertices 0..n-1 with weight matrix W, where W(i, j) > 0
/// encodes the edge j -> i (agent i can hear agent j). No self-loops.
class DirectedWeightedGraph {
 public:
  DirectedWeightedGraph() = default;

  /// Bounds default to the smallest and largest positive weight.
  explicit DirectedWeightedGraph(Matrix weights);
  DirectedWeightedGraph(Matrix weights, WeightBounds bounds);

  static DirectedWeightedGraph empty(std::size_t n);

  std::size_t size() const { return weights_.rows(); }
  double weight(std::size_t i, std::size_t j) const { return weights_(i, j); }
  bool has_edge(std::size_t from, std::size_t to) const { return weights_(to, from) > 0.0; }
  const Matrix& weights() const { return weights_; }
  const WeightBounds& bounds() const { return bounds_; }

 private:
  Matrix weights_;
  WeightBounds bounds_;
};

/// {j : W(i, j) > 0}. Throws std::out_of_range for a bad index.
std::vector<std::size_t> neighbors(const DirectedWeightedGraph& g, std::size_t i);

/// Vertices reachable from `root` along directed edges, including itself.
/// The adjacency is read from a square matrix where m(i, j) > eps means j -> i.
std::vector<bool> reachable_from(const Matrix& m, std::size_t root, double eps = 0.0);

/// Smallest vertex from which every vertex is reachable, if any.
std::optional<std::size_t> has_spanning_tree(const DirectedWeightedGraph& g);
std::optional<std::size_t> spanning_tree_root(const Matrix& pattern, double eps = 0.0);

bool strongly_connected(const DirectedWeightedGraph& g);

/// Edge-set union; each edge keeps the largest contributing weight.
DirectedWeightedGraph graph_union(std::span<const DirectedWeightedGraph> gs);

/// True iff the graph of A (self-loops included) has a spanning tree whose
/// root carries a self-loop.
bool in_gamma_s(const Matrix& a, double eps = 0.0);

}  // namespace consensus
