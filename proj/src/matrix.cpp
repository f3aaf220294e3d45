#include "consensus/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "consensus/errors.hpp"
#include "consensus/graph.hpp"

namespace consensus {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::constant(std::size_t rows, std::size_t cols, double value) {
  return Matrix(rows, cols, value);
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aik * brow[j];
    }
  }
  return c;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matrix-vector: dimension mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: dimension mismatch");
  double d = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    d = std::max(d, std::abs(a.data()[k] - b.data()[k]));
  return d;
}

bool is_stochastic(const Matrix& m, double tol) {
  if (!m.square()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (double v : m.row(i)) {
      if (v < 0.0 || !std::isfinite(v)) return false;
      s += v;
    }
    if (std::abs(s - 1.0) > tol) return false;
  }
  return true;
}

StochasticMatrix::StochasticMatrix(Matrix m, double tol) : m_(std::move(m)) {
  if (!is_stochastic(m_, tol)) throw std::invalid_argument("matrix is not stochastic");
}

StochasticMatrix StochasticMatrix::identity(std::size_t n) {
  return StochasticMatrix(Matrix::identity(n));
}

StochasticMatrix StochasticMatrix::uniform(std::size_t n) {
  return StochasticMatrix(Matrix(n, n, 1.0 / static_cast<double>(n)));
}

std::vector<double> normalize_weights(const DirectedWeightedGraph& g,
                                      std::span<const std::size_t> received,
                                      std::size_t i) {
  const std::size_t n = g.size();
  if (i >= n) throw std::out_of_range("agent index out of range");
  std::vector<double> row(n, 0.0);
  if (received.empty()) {
    row[i] = 1.0;
    return row;
  }
  double total = 0.0;
  for (std::size_t j : received) {
    if (j >= n || j == i || !(g.weight(i, j) > 0.0))
      throw InvalidReception("agent " + std::to_string(i + 1) + " cannot receive from agent " +
                             std::to_string(j + 1));
    total += g.weight(i, j);
  }
  for (std::size_t j : received) row[j] = g.weight(i, j) / total;
  return row;
}

StochasticMatrix normalized_matrix(const DirectedWeightedGraph& g) {
  const std::size_t n = g.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = neighbors(g, i);
    const auto row = normalize_weights(g, nb, i);
    std::copy(row.begin(), row.end(), m.row(i).begin());
  }
  return StochasticMatrix(std::move(m));
}

double delta(const Matrix& a) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double lo = a(0, j);
    double hi = lo;
    for (std::size_t i = 1; i < a.rows(); ++i) {
      lo = std::min(lo, a(i, j));
      hi = std::max(hi, a(i, j));
    }
    d = std::max(d, hi - lo);
  }
  return d;
}

double delta(const StochasticMatrix& a) { return delta(a.matrix()); }

double row_overlap(const Matrix& a) {
  double best = 1.0;
  for (std::size_t i1 = 0; i1 < a.rows(); ++i1) {
    const auto r1 = a.row(i1);
    for (std::size_t i2 = i1 + 1; i2 < a.rows(); ++i2) {
      const auto r2 = a.row(i2);
      double s = 0.0;
      for (std::size_t j = 0; j < r1.size(); ++j) s += std::min(r1[j], r2[j]);
      best = std::min(best, s);
    }
  }
  return std::clamp(best, 0.0, 1.0);
}

double lambda(const Matrix& a) { return 1.0 - row_overlap(a); }
double lambda(const StochasticMatrix& a) { return lambda(a.matrix()); }

bool same_type(const StochasticMatrix& a, const StochasticMatrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("same_type: dimension mismatch");
  const auto da = a.matrix().data();
  const auto db = b.matrix().data();
  for (std::size_t k = 0; k < da.size(); ++k)
    if ((da[k] > kPatternEpsilon) != (db[k] > kPatternEpsilon)) return false;
  return true;
}

namespace {

Matrix matrix_power(const Matrix& a, std::size_t k) {
  Matrix result = Matrix::identity(a.rows());
  Matrix base = a;
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

}  // namespace

bool is_sia(const StochasticMatrix& a, std::size_t k_max, double tol) {
  if (k_max == 0 || !(tol > 0.0)) throw std::invalid_argument("is_sia: need k_max >= 1, tol > 0");
  if (in_gamma_s(a.matrix(), kPatternEpsilon)) return true;
  // delta(A^k) is non-increasing in k, so the largest power decides.
  return delta(matrix_power(a.matrix(), k_max)) < tol;
}

bool is_sia(const StochasticMatrix& a) {
  return is_sia(a, default_sia_budget(a.size()), kSiaTolerance);
}

std::vector<double> stationary_vector(const StochasticMatrix& a, double tol) {
  if (!is_sia(a)) throw CertificationError("stationary_vector: matrix not certified SIA");
  const std::size_t n = a.size();
  const Matrix& m = a.matrix();
  std::vector<double> f(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  // The residual only bounds the error up to the spectral gap, so once it is
  // below tol keep going while it still shrinks.
  double previous = INFINITY;
  for (std::size_t it = 0; it < kStationaryIterationBudget; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) next[j] += f[i] * m(i, j);
    double residual = 0.0;
    for (std::size_t j = 0; j < n; ++j) residual = std::max(residual, std::abs(next[j] - f[j]));
    const bool converged = previous <= tol && (residual >= previous || residual <= 1e-3 * tol);
    if (converged || (residual <= tol && it + 1 == kStationaryIterationBudget)) {
      double s = 0.0;
      for (double& v : f) {
        v = std::max(v, 0.0);
        s += v;
      }
      for (double& v : f) v /= s;
      return f;
    }
    previous = residual;
    double s = 0.0;
    for (double v : next) s += v;
    for (std::size_t j = 0; j < n; ++j) f[j] = next[j] / s;
  }
  throw CertificationError("stationary_vector: power iteration did not converge");
}

StochasticMatrix left_product(std::span<const StochasticMatrix> ms) {
  if (ms.empty()) throw std::invalid_argument("left_product: empty sequence");
  Matrix acc = ms.front().matrix();
  for (std::size_t k = 1; k < ms.size(); ++k) {
    if (ms[k].size() != acc.rows()) throw std::invalid_argument("left_product: dimension mismatch");
    acc = ms[k].matrix() * acc;
  }
  return StochasticMatrix(std::move(acc), 1e-10);
}

}  // namespace consensus
