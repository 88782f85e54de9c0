#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tsylv/errors.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/tensor.hpp"

namespace tsylv {

// The Laplace-like tensor equation
//
//   sum_m  X x_m A_m = B,   m = 0..d-1,
//
// with square coefficients A_m of order n_m and B of shape (n_0, ..., n_{d-1}).
template <typename T>
struct LaplaceProblem {
  std::vector<Matrix<T>> coeffs;
  Tensor<T> rhs;

  int order() const { return static_cast<int>(coeffs.size()); }
  std::vector<int> dims() const {
    std::vector<int> d;
    d.reserve(coeffs.size());
    for (const auto& a : coeffs) d.push_back(a.rows());
    return d;
  }
};

// The Kronecker-structured generalized Sylvester equation
//
//   X x_0 A_0  +  X x_0 C x_1 A_1 x_2 ... x_{d-1} A_{d-1} = B,
//
// i.e. vec form (I (x) ... (x) I (x) A_0 + A_{d-1} (x) ... (x) A_1 (x) C) x = b.
// C acts on mode 0 and forms a pencil with A_0.
template <typename T>
struct GSylvProblem {
  std::vector<Matrix<T>> coeffs; // A_0 ... A_{d-1}
  Matrix<T> c;
  Tensor<T> rhs;

  int order() const { return static_cast<int>(coeffs.size()); }
  std::vector<int> dims() const {
    std::vector<int> d;
    d.reserve(coeffs.size());
    for (const auto& a : coeffs) d.push_back(a.rows());
    return d;
  }
};

namespace detail {
template <typename T>
void validate_coeffs_and_rhs(const std::vector<Matrix<T>>& coeffs,
                             const Tensor<T>& rhs, const char* who) {
  if (coeffs.size() < 2)
    throw dimension_error(std::string(who) + ": need order d >= 2");
  if (rhs.order() != static_cast<int>(coeffs.size()))
    throw dimension_error(std::string(who) +
                          ": rhs order does not match coefficient count");
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    const auto& a = coeffs[m];
    if (a.rows() != a.cols() || a.rows() == 0)
      throw dimension_error(std::string(who) + ": coefficient " +
                            std::to_string(m) + " must be square, non-empty");
    if (a.rows() != rhs.dim(static_cast<int>(m)))
      throw dimension_error(std::string(who) + ": coefficient " +
                            std::to_string(m) + " order " +
                            std::to_string(a.rows()) +
                            " does not match rhs extent " +
                            std::to_string(rhs.dim(static_cast<int>(m))));
  }
}
} // namespace detail

template <typename T>
void validate(const LaplaceProblem<T>& p) {
  detail::validate_coeffs_and_rhs(p.coeffs, p.rhs, "LaplaceProblem");
}

template <typename T>
void validate(const GSylvProblem<T>& p) {
  detail::validate_coeffs_and_rhs(p.coeffs, p.rhs, "GSylvProblem");
  if (p.c.rows() != p.c.cols() || p.c.rows() != p.coeffs[0].rows())
    throw dimension_error(
        "GSylvProblem: C must be square with the order of A_0");
}

// Spectral-shift special case: choosing A_0 = -lambda*I poses the shifted
// Kronecker-product system
//   (A_{d-1} (x) ... (x) A_1 (x) C - lambda*I) vec(X) = vec(B)
// as a two-term equation.  `factors` holds A_1..A_{d-1}; C acts on mode 0.
template <typename T>
GSylvProblem<T> shifted_kron_problem(std::vector<Matrix<T>> factors,
                                     Matrix<T> c, T lambda, Tensor<T> rhs) {
  if (factors.size() + 1 != static_cast<std::size_t>(rhs.order()))
    throw dimension_error(
        "shifted_kron_problem: rhs needs one mode for C plus one per factor");
  const int n0 = rhs.order() > 0 ? rhs.dim(0) : 0;
  GSylvProblem<T> p;
  p.coeffs.reserve(factors.size() + 1);
  Matrix<T> a0 = Matrix<T>::identity(n0);
  a0 *= -lambda;
  p.coeffs.push_back(std::move(a0));
  for (auto& f : factors) p.coeffs.push_back(std::move(f));
  p.c = std::move(c);
  p.rhs = std::move(rhs);
  validate(p);
  return p;
}

} // namespace tsylv
