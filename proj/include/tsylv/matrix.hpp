#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tsylv/blas.hpp"
#include "tsylv/errors.hpp"
#include "tsylv/scalar.hpp"

namespace tsylv {

// Dense column-major matrix, the layout BLAS/LAPACK expect.
template <typename T>
class Matrix {
public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0)
      throw dimension_error("Matrix: negative dimension");
    data_.assign(static_cast<std::size_t>(rows) * cols, T{});
  }
  Matrix(int rows, int cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows < 0 || cols < 0 ||
        data_.size() != static_cast<std::size_t>(rows) * cols)
      throw dimension_error("Matrix: data size does not match shape");
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t size() const noexcept { return data_.size(); }

  T& operator()(int i, int j) {
    return data_[static_cast<std::size_t>(j) * rows_ + i];
  }
  const T& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(j) * rows_ + i];
  }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }
  T* col(int j) noexcept { return data_.data() + static_cast<std::size_t>(j) * rows_; }
  const T* col(int j) const noexcept {
    return data_.data() + static_cast<std::size_t>(j) * rows_;
  }

  // Copy of the half-open sub-block [r0,r1) x [c0,c1).
  Matrix block(int r0, int r1, int c0, int c1) const {
    if (r0 < 0 || r1 > rows_ || c0 < 0 || c1 > cols_ || r0 > r1 || c0 > c1)
      throw dimension_error("Matrix::block: range out of bounds");
    Matrix out(r1 - r0, c1 - c0);
    for (int j = c0; j < c1; ++j)
      for (int i = r0; i < r1; ++i) out(i - r0, j - c0) = (*this)(i, j);
    return out;
  }

  double frobenius_norm() const {
    double s = 0;
    for (const T& v : data_) s += static_cast<double>(abs_squared(v));
    return std::sqrt(s);
  }

  Matrix& operator+=(const Matrix& rhs) {
    require_same_shape(rhs, "+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& rhs) {
    require_same_shape(rhs, "-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
  }
  Matrix& operator*=(T s) {
    for (T& v : data_) v *= s;
    return *this;
  }

private:
  void require_same_shape(const Matrix& rhs, const char* op) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
      throw dimension_error(std::string("Matrix: shape mismatch in ") + op);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

template <typename T>
Matrix<T> operator+(Matrix<T> a, const Matrix<T>& b) { return a += b; }
template <typename T>
Matrix<T> operator-(Matrix<T> a, const Matrix<T>& b) { return a -= b; }

template <typename T>
Matrix<T> transposed(const Matrix<T>& a) {
  Matrix<T> out(a.cols(), a.rows());
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) out(j, i) = a(i, j);
  return out;
}

template <typename T>
Matrix<T> conjugated(Matrix<T> a) {
  if constexpr (is_complex_v<T>) {
    for (int j = 0; j < a.cols(); ++j)
      for (int i = 0; i < a.rows(); ++i) a(i, j) = conjugate(a(i, j));
  }
  return a;
}

template <typename T>
Matrix<T> adjoint(const Matrix<T>& a) { return conjugated(transposed(a)); }

// C = op(A)*op(B) through GEMM; op in {'N','T','C'}.
template <typename T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b, char opa = 'N',
                 char opb = 'N') {
  const int am = (opa == 'N') ? a.rows() : a.cols();
  const int ak = (opa == 'N') ? a.cols() : a.rows();
  const int bk = (opb == 'N') ? b.rows() : b.cols();
  const int bn = (opb == 'N') ? b.cols() : b.rows();
  if (ak != bk) throw dimension_error("matmul: inner dimensions differ");
  Matrix<T> c(am, bn);
  gemm(opa, opb, am, bn, ak, T(1), a.data(), std::max(1, a.rows()), b.data(),
       std::max(1, b.rows()), T(0), c.data(), std::max(1, am));
  return c;
}

inline Matrix<Complex> complexified(const Matrix<double>& a) {
  Matrix<Complex> out(a.rows(), a.cols());
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) out(i, j) = Complex(a(i, j), 0.0);
  return out;
}

inline const Matrix<Complex>& complexified(const Matrix<Complex>& a) {
  return a;
}

// Exact structural predicates (used to pick fast paths and to validate
// triangular-solver preconditions; no tolerance involved).
template <typename T>
bool is_upper_triangular(const Matrix<T>& a) {
  for (int j = 0; j < a.cols(); ++j)
    for (int i = j + 1; i < a.rows(); ++i)
      if (a(i, j) != T{}) return false;
  return true;
}

// Upper quasi-triangular: at most one nonzero sub-diagonal below each column,
// and no two consecutive sub-diagonal entries (1x1/2x2 diagonal blocks only).
template <typename T>
bool is_upper_quasi_triangular(const Matrix<T>& a) {
  if (a.rows() != a.cols()) return false;
  const int n = a.rows();
  for (int j = 0; j < n; ++j)
    for (int i = j + 2; i < n; ++i)
      if (a(i, j) != T{}) return false;
  for (int j = 0; j + 2 < n; ++j)
    if (a(j + 1, j) != T{} && a(j + 2, j + 1) != T{}) return false;
  return true;
}

} // namespace tsylv
