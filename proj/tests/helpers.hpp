#pragma once

#include <cmath>
#include <vector>

#include "tsylv/matrix.hpp"
#include "tsylv/random.hpp"
#include "tsylv/scalar.hpp"
#include "tsylv/tensor.hpp"

namespace testutil {

using tsylv::Complex;
using tsylv::Matrix;
using tsylv::Tensor;

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

template <typename T>
double rel_diff(const Tensor<T>& a, const Tensor<T>& b) {
  Tensor<T> d = a;
  d -= b;
  const double nb = b.frobenius_norm();
  return d.frobenius_norm() / (nb == 0 ? 1.0 : nb);
}

template <typename T>
double rel_diff(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> d = a;
  d -= b;
  const double nb = b.frobenius_norm();
  return d.frobenius_norm() / (nb == 0 ? 1.0 : nb);
}

template <typename T>
double rel_diff(const std::vector<T>& a, const std::vector<T>& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += tsylv::abs_squared(a[i] - b[i]);
    den += tsylv::abs_squared(b[i]);
  }
  return std::sqrt(num) / (den == 0 ? 1.0 : std::sqrt(den));
}

// Test-local Kronecker product written as index loops, kept deliberately
// separate from the library implementation.
template <typename T>
Matrix<T> kron_ref(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

template <typename T>
std::vector<T> matvec_ref(const Matrix<T>& a, const std::vector<T>& x) {
  std::vector<T> y(a.rows(), T{});
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) y[i] += a(i, j) * x[j];
  return y;
}

} // namespace testutil
