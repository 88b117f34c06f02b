#pragma once

#include <cmath>
#include <type_traits>
#include <utility>
#include <vector>

#include "bifix/errors.hpp"
#include "bifix/rational.hpp"

namespace bifix {

/// Row-major dense matrix over double or Rational. Only what the moment
/// systems and the absorbing-chain solves need.
template <typename Scalar>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols, Scalar init = Scalar(0))
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, init) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Scalar& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Scalar& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

 private:
  int rows_, cols_;
  std::vector<Scalar> data_;
};

namespace detail {

inline double abs_value(double x) { return std::abs(x); }
inline Rational abs_value(const Rational& x) { return x < 0 ? Rational(-x) : x; }

}  // namespace detail

/// Gaussian elimination with scaled partial pivoting; solves A X = B for a
/// matrix of right-hand sides. Throws ComputeError{SingularSystem} when the
/// scaled pivot falls below 1e-12 (exactly zero in rational arithmetic).
/// Desk-scale systems only; exactness with Rational scalars matters more
/// than speed here.
template <typename Scalar>
Matrix<Scalar> solve_linear(Matrix<Scalar> a, Matrix<Scalar> b) {
  const int n = a.rows();
  if (a.cols() != n || b.rows() != n) {
    throw std::invalid_argument("solve_linear: dimension mismatch");
  }
  const int nrhs = b.cols();

  std::vector<Scalar> scale(n);
  for (int i = 0; i < n; ++i) {
    Scalar s(0);
    for (int j = 0; j < n; ++j) s = std::max(s, detail::abs_value(a(i, j)));
    if (s == Scalar(0)) {
      throw ComputeError(ComputeCode::SingularSystem, "zero row in linear system");
    }
    scale[i] = s;
  }

  for (int col = 0; col < n; ++col) {
    int pivot = col;
    Scalar best(-1);
    for (int row = col; row < n; ++row) {
      Scalar candidate = detail::abs_value(a(row, col)) / scale[row];
      if (candidate > best) {
        best = candidate;
        pivot = row;
      }
    }
    bool singular;
    if constexpr (std::is_floating_point_v<Scalar>) {
      singular = !(best > 1e-12);
    } else {
      singular = (best == Scalar(0));
    }
    if (singular) {
      throw ComputeError(ComputeCode::SingularSystem,
                         "linear system is singular (degenerate sequence set)");
    }
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      for (int j = 0; j < nrhs; ++j) std::swap(b(col, j), b(pivot, j));
      std::swap(scale[col], scale[pivot]);
    }
    for (int row = col + 1; row < n; ++row) {
      if (a(row, col) == Scalar(0)) continue;
      Scalar factor = a(row, col) / a(col, col);
      a(row, col) = Scalar(0);
      for (int j = col + 1; j < n; ++j) a(row, j) -= factor * a(col, j);
      for (int j = 0; j < nrhs; ++j) b(row, j) -= factor * b(col, j);
    }
  }

  Matrix<Scalar> x(n, nrhs);
  for (int col = n - 1; col >= 0; --col) {
    for (int k = 0; k < nrhs; ++k) {
      Scalar acc = b(col, k);
      for (int j = col + 1; j < n; ++j) acc -= a(col, j) * x(j, k);
      x(col, k) = acc / a(col, col);
    }
  }
  return x;
}

template <typename Scalar>
std::vector<Scalar> solve_linear(Matrix<Scalar> a, std::vector<Scalar> rhs) {
  const int n = static_cast<int>(rhs.size());
  Matrix<Scalar> b(n, 1);
  for (int i = 0; i < n; ++i) b(i, 0) = std::move(rhs[i]);
  Matrix<Scalar> x = solve_linear(std::move(a), std::move(b));
  std::vector<Scalar> out(n);
  for (int i = 0; i < n; ++i) out[i] = std::move(x(i, 0));
  return out;
}

}  // namespace bifix
