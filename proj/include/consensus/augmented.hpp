#pragma once

// Discrete-time reformulation of a simulated run. The stacked window state
// z(k) = [x(t_k); x(t_{k-1}); ...; x(t_{k-m+1})] advances by one block
// companion matrix per event, which gives an independent route to every
// state the simulator produced.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "consensus/dynamics.hpp"
#include "consensus/matrix.hpp"

namespace consensus {

/// Block companion matrix of window depth m = blocks.size():
///
///   [ e^{-h} I + (1-e^{-h}) A_1   (1-e^{-h}) A_2  ...  (1-e^{-h}) A_m ]
///   [ I                           0               ...  0              ]
///   [ 0                           I               ...  0              ]
///   [ ...                                                             ]
///
/// The blocks sum to a stochastic matrix, so the assembled matrix is
/// stochastic. Stored by blocks; assemble() materializes the dense form.
class PiMatrix {
 public:
  double h() const { return h_; }
  std::size_t window() const { return blocks_.size(); }
  std::size_t agents() const { return blocks_.empty() ? 0 : blocks_.front().rows(); }
  std::size_t dimension() const { return window() * agents(); }
  const std::vector<Matrix>& blocks() const { return blocks_; }

  Matrix assemble() const;
  StochasticMatrix assemble_stochastic() const;

  /// pi * z for a stacked state z of length m*n.
  std::vector<double> apply(std::span<const double> z) const;
  /// p <- pi * p, where p has m*n rows.
  void apply_left(Matrix& p) const;

 private:
  friend PiMatrix build_pi(double, std::vector<Matrix>, double);
  double h_ = 0.0;
  std::vector<Matrix> blocks_;
};

/// Throws std::invalid_argument unless 0 < h <= h_max, all blocks are
/// nonnegative n x n, and their sum is stochastic.
PiMatrix build_pi(double h, std::vector<Matrix> blocks,
                  double h_max = std::numeric_limits<double>::infinity());

/// Deepest window slot any update of the run refers to, plus one: the
/// smallest m for which decompose_run succeeds.
std::size_t required_window(const RunResult& run);

/// The window depth the scenario's bounds guarantee: m_check without
/// delays, m_hat with delays.
std::size_t guaranteed_window(const RunResult& run);

/// One matrix per consecutive event pair (t_k, t_{k+1}). Reads whose value
/// predates time 0 map to the deepest slot. Throws WindowError if some read
/// or hold lies deeper than m - 1 slots back.
std::vector<PiMatrix> decompose_run(const RunResult& run, std::size_t m);

/// Initial stacked state: x(0) repeated m times.
std::vector<double> initial_window(const RunResult& run, std::size_t m);

/// Row k is z(k), obtained by iterating the decomposed matrices from the
/// initial stacked state.
Matrix oracle_run(const RunResult& run, std::size_t m);
Matrix oracle_run(const RunResult& run, std::span<const PiMatrix> pis);

struct ConsensusCertificate {
  std::vector<double> window_lambdas;
  std::vector<double> window_overlaps;  // 1 - lambda per window
  double log_bound = 0.0;               // sum of log(lambda)
  double bound = 1.0;                   // product of lambda
  bool certified = false;
};

/// Splits `pis` into consecutive windows of the given lengths and bounds the
/// disagreement of the total product by the product of the windows'
/// ergodicity coefficients. Certified when every window is scrambling.
ConsensusCertificate consensus_certificate(std::span<const PiMatrix> pis,
                                           std::span<const std::size_t> window_lengths);

/// Product pis[last] * ... * pis[first] as a dense matrix.
Matrix window_product(std::span<const PiMatrix> pis);

/// Consecutive windows over the transitions, each spanning at least
/// `duration` seconds of event time. A trailing partial window is dropped.
std::vector<std::size_t> windows_by_duration(const GlobalEventSequence& events, double duration);

}  // namespace consensus
