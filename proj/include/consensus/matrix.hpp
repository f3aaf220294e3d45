#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace consensus {

class DirectedWeightedGraph;

/// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix constant(std::size_t rows, std::size_t cols, double value);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);

/// Largest absolute entrywise difference; dimensions must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);

inline constexpr double kStochasticTolerance = 1e-12;
inline constexpr double kPatternEpsilon = 1e-12;

/// Square nonnegative matrix whose rows sum to one. The tolerance used for
/// the row-sum check is chosen by the caller at construction.
class StochasticMatrix {
 public:
  /// Throws std::invalid_argument when `m` is not square, has a negative
  /// entry, or has a row sum off by more than `tol`.
  explicit StochasticMatrix(Matrix m, double tol = kStochasticTolerance);

  static StochasticMatrix identity(std::size_t n);
  /// The rank-one matrix with every row equal to 1/n.
  static StochasticMatrix uniform(std::size_t n);

  std::size_t size() const { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  std::span<const double> row(std::size_t i) const { return m_.row(i); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

bool is_stochastic(const Matrix& m, double tol = kStochasticTolerance);

// Row i of the normalized weight matrix for an update at which agent i
// received exactly the neighbors in `received`. An empty reception yields the
// unit row at i.
std::vector<double> normalize_weights(const DirectedWeightedGraph& g,
                                      std::span<const std::size_t> received,
                                      std::size_t i);

/// Normalized matrix when every agent receives all its neighbors.
StochasticMatrix normalized_matrix(const DirectedWeightedGraph& g);

// max_j max_{i1,i2} |a_{i1 j} - a_{i2 j}|
double delta(const StochasticMatrix& a);
double delta(const Matrix& a);

// 1 - min_{i1,i2} sum_j min(a_{i1 j}, a_{i2 j}); scrambling iff < 1.
double lambda(const StochasticMatrix& a);
double lambda(const Matrix& a);

/// 1 - lambda, computed directly so that tiny overlaps survive rounding.
double row_overlap(const Matrix& a);

inline bool is_scrambling(const StochasticMatrix& a) { return lambda(a) < 1.0; }

/// Same zero/positive pattern. Entries at or below kPatternEpsilon count as
/// zero. Throws std::invalid_argument on dimension mismatch.
bool same_type(const StochasticMatrix& a, const StochasticMatrix& b);

inline constexpr double kSiaTolerance = 1e-9;
inline std::size_t default_sia_budget(std::size_t n) { return 4 * n * n; }

/// Sufficient SIA certificate: the self-looped spanning tree test, then
/// powering up to k_max. False means "not certified within budget".
bool is_sia(const StochasticMatrix& a, std::size_t k_max, double tol = kSiaTolerance);
bool is_sia(const StochasticMatrix& a);

/// Nonnegative f with sum 1 and f^T A = f^T. Requires `a` to certify as SIA
/// with the default budget; throws CertificationError otherwise or when
/// power iteration does not reach `tol` within its budget.
std::vector<double> stationary_vector(const StochasticMatrix& a, double tol = 1e-12);

inline constexpr std::size_t kStationaryIterationBudget = 100000;

/// A_k A_{k-1} ... A_1 for ms = {A_1, ..., A_k}. Throws on empty input or
/// dimension mismatch.
StochasticMatrix left_product(std::span<const StochasticMatrix> ms);

}  // namespace consensus
