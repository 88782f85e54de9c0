#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "tsylv/blas.hpp"
#include "tsylv/errors.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/problems.hpp"
#include "tsylv/scalar.hpp"
#include "tsylv/tensor.hpp"

// Reference implementations used to validate the structured solvers: the
// equations are assembled as explicit dense operators on vec(X) and solved by
// plain LU.  Deliberately shares nothing with the solver code paths beyond
// the tensor primitives, so the two sides can cross-check each other.
namespace tsylv::oracle {

inline constexpr std::size_t default_size_cap = 4096;

namespace detail {
inline std::size_t checked_problem_size(const std::vector<int>& dims,
                                        std::size_t size_cap,
                                        const char* who) {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  if (n > size_cap)
    throw dimension_error(std::string(who) + ": operator order " +
                          std::to_string(n) + " exceeds cap " +
                          std::to_string(size_cap));
  return n;
}
} // namespace detail

// Dense operator of the Laplace-like equation: the Kronecker sum
// sum_m I (x) ... (x) A_m (x) ... (x) I, written by explicit index maps.
template <typename T>
Matrix<T> assemble_laplace_matrix(const std::vector<Matrix<T>>& coeffs,
                                  std::size_t size_cap = default_size_cap) {
  if (coeffs.empty())
    throw dimension_error("assemble_laplace_matrix: no coefficients");
  std::vector<int> dims;
  for (const auto& a : coeffs) {
    if (a.rows() != a.cols() || a.rows() == 0)
      throw dimension_error(
          "assemble_laplace_matrix: coefficients must be square, non-empty");
    dims.push_back(a.rows());
  }
  const std::size_t big =
      detail::checked_problem_size(dims, size_cap, "assemble_laplace_matrix");
  Matrix<T> out(static_cast<int>(big), static_cast<int>(big));
  std::size_t stride = 1;
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    const auto& a = coeffs[m];
    const std::size_t n = static_cast<std::size_t>(a.rows());
    const std::size_t outer = big / (stride * n);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
          const T aij = a(static_cast<int>(i), static_cast<int>(j));
          if (aij == T{}) continue;
          const std::size_t rb = o * stride * n + i * stride;
          const std::size_t cb = o * stride * n + j * stride;
          for (std::size_t in = 0; in < stride; ++in)
            out(static_cast<int>(rb + in), static_cast<int>(cb + in)) += aij;
        }
    stride *= n;
  }
  return out;
}

// Dense operator of the Kronecker-structured generalized equation:
// I (x) ... (x) I (x) A_0  +  A_{d-1} (x) ... (x) A_1 (x) C.
template <typename T>
Matrix<T> assemble_gsylv_matrix(const std::vector<Matrix<T>>& coeffs,
                                const Matrix<T>& c,
                                std::size_t size_cap = default_size_cap) {
  if (coeffs.empty())
    throw dimension_error("assemble_gsylv_matrix: no coefficients");
  std::vector<int> dims;
  for (const auto& a : coeffs) {
    if (a.rows() != a.cols() || a.rows() == 0)
      throw dimension_error(
          "assemble_gsylv_matrix: coefficients must be square, non-empty");
    dims.push_back(a.rows());
  }
  if (c.rows() != c.cols() || c.rows() != dims[0])
    throw dimension_error(
        "assemble_gsylv_matrix: C must be square with the order of A_0");
  const std::size_t big =
      detail::checked_problem_size(dims, size_cap, "assemble_gsylv_matrix");
  const int n = static_cast<int>(big);
  Matrix<T> out(n, n);

  // First term: A_0 acting on mode 0 (stride 1).
  {
    const int n0 = dims[0];
    for (std::size_t o = 0; o < big / n0; ++o)
      for (int j = 0; j < n0; ++j)
        for (int i = 0; i < n0; ++i)
          out(static_cast<int>(o * n0) + i, static_cast<int>(o * n0) + j) +=
              coeffs[0](i, j);
  }

  // Second term: full Kronecker product, entry by entry via digit tables.
  const int d = static_cast<int>(coeffs.size());
  std::vector<std::vector<int>> digit(d, std::vector<int>(big));
  {
    std::size_t stride = 1;
    for (int m = 0; m < d; ++m) {
      for (std::size_t lin = 0; lin < big; ++lin)
        digit[m][lin] =
            static_cast<int>((lin / stride) % static_cast<std::size_t>(dims[m]));
      stride *= static_cast<std::size_t>(dims[m]);
    }
  }
  for (int col = 0; col < n; ++col)
    for (int row = 0; row < n; ++row) {
      T v = c(digit[0][row], digit[0][col]);
      for (int m = 1; m < d && v != T{}; ++m)
        v *= coeffs[m](digit[m][row], digit[m][col]);
      out(row, col) += v;
    }
  return out;
}

// LU with partial pivoting (blocked right-looking), then two triangular
// substitutions.  Hand-rolled on purpose: the oracle must not depend on the
// factorization kernels it is checking.
template <typename T>
std::vector<T> dense_solve(Matrix<T> a, std::vector<T> b) {
  if (a.rows() != a.cols())
    throw dimension_error("dense_solve: matrix must be square");
  const int n = a.rows();
  if (static_cast<int>(b.size()) != n)
    throw dimension_error("dense_solve: rhs length mismatch");
  if (n == 0) return b;
  const double tiny = unit_roundoff<double> * a.frobenius_norm();
  std::vector<int> piv(n);
  const int nb = 48;
  for (int k0 = 0; k0 < n; k0 += nb) {
    const int kend = std::min(k0 + nb, n);
    // Panel factorization with immediate full-row swaps.
    for (int k = k0; k < kend; ++k) {
      int p = k;
      double best = std::abs(a(k, k));
      for (int i = k + 1; i < n; ++i)
        if (std::abs(a(i, k)) > best) best = std::abs(a(i, k)), p = i;
      if (best <= tiny)
        throw singular_error("dense_solve: numerically singular at column " +
                                 std::to_string(k),
                             {k}, {std::complex<double>(a(p, k))}, best);
      piv[k] = p;
      if (p != k)
        for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      const T dk = a(k, k);
      for (int i = k + 1; i < n; ++i) a(i, k) /= dk;
      // Update only the remaining panel columns now.
      for (int j = k + 1; j < kend; ++j) {
        const T akj = a(k, j);
        if (akj == T{}) continue;
        T* cj = a.col(j);
        const T* ck = a.col(k);
        for (int i = k + 1; i < n; ++i) cj[i] -= ck[i] * akj;
      }
    }
    if (kend == n) break;
    // U12 = L11^{-1} A12 (unit lower triangular forward substitution).
    for (int j = kend; j < n; ++j) {
      T* cj = a.col(j);
      for (int k = k0; k < kend; ++k) {
        const T v = cj[k];
        if (v == T{}) continue;
        const T* ck = a.col(k);
        for (int i = k + 1; i < kend; ++i) cj[i] -= ck[i] * v;
      }
    }
    // Trailing update A22 -= L21 * U12.
    gemm('N', 'N', n - kend, n - kend, kend - k0, T(-1), &a(kend, k0), n,
         &a(k0, kend), n, T(1), &a(kend, kend), n);
  }
  // Pb, then L y = Pb, then U x = y.
  for (int k = 0; k < n; ++k)
    if (piv[k] != k) std::swap(b[k], b[piv[k]]);
  for (int k = 0; k < n; ++k) {
    const T v = b[k];
    if (v == T{}) continue;
    const T* ck = a.col(k);
    for (int i = k + 1; i < n; ++i) b[i] -= ck[i] * v;
  }
  for (int k = n - 1; k >= 0; --k) {
    const T* ck = a.col(k);
    b[k] /= ck[k];
    const T v = b[k];
    for (int i = 0; i < k; ++i) b[i] -= ck[i] * v;
  }
  return b;
}

// Assemble-and-solve reference solutions.
template <typename T>
Tensor<T> solve(const LaplaceProblem<T>& p,
                std::size_t size_cap = default_size_cap) {
  validate(p);
  Matrix<T> op = assemble_laplace_matrix(p.coeffs, size_cap);
  std::vector<T> x = dense_solve(std::move(op), p.rhs.values());
  return Tensor<T>(p.rhs.dims(), std::move(x));
}

template <typename T>
Tensor<T> solve(const GSylvProblem<T>& p,
                std::size_t size_cap = default_size_cap) {
  validate(p);
  Matrix<T> op = assemble_gsylv_matrix(p.coeffs, p.c, size_cap);
  std::vector<T> x = dense_solve(std::move(op), p.rhs.values());
  return Tensor<T>(p.rhs.dims(), std::move(x));
}

namespace detail {
inline double safe_ratio(double num, double denom) {
  if (denom == 0)
    return num == 0 ? 0 : std::numeric_limits<double>::infinity();
  return num / denom;
}
} // namespace detail

// Relative residual || op(X) - B ||_F / ( scale(op) * ||X||_F + ||B||_F ),
// computed through mode products only (never the assembled operator).
template <typename T>
double residual(const LaplaceProblem<T>& p, const Tensor<T>& x) {
  validate(p);
  if (x.dims() != p.rhs.dims())
    throw dimension_error("residual: solution shape mismatch");
  Tensor<T> r = p.rhs;
  double scale = 0;
  for (std::size_t m = 0; m < p.coeffs.size(); ++m) {
    r -= mode_multiply(x, p.coeffs[m], static_cast<int>(m));
    scale += p.coeffs[m].frobenius_norm();
  }
  return detail::safe_ratio(r.frobenius_norm(),
                            scale * x.frobenius_norm() +
                                p.rhs.frobenius_norm());
}

template <typename T>
double residual(const GSylvProblem<T>& p, const Tensor<T>& x) {
  validate(p);
  if (x.dims() != p.rhs.dims())
    throw dimension_error("residual: solution shape mismatch");
  Tensor<T> r = p.rhs;
  r -= mode_multiply(x, p.coeffs[0], 0);
  Tensor<T> t = mode_multiply(x, p.c, 0);
  double prod = 1;
  for (std::size_t m = 1; m < p.coeffs.size(); ++m) {
    t = mode_multiply(t, p.coeffs[m], static_cast<int>(m));
    prod *= p.coeffs[m].frobenius_norm();
  }
  r -= t;
  const double scale =
      p.coeffs[0].frobenius_norm() + p.c.frobenius_norm() * prod;
  return detail::safe_ratio(r.frobenius_norm(),
                            scale * x.frobenius_norm() +
                                p.rhs.frobenius_norm());
}

} // namespace tsylv::oracle
