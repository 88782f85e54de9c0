#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "tsylv/blas.hpp"
#include "tsylv/errors.hpp"
#include "tsylv/kernels.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/scalar.hpp"
#include "tsylv/solvability.hpp"

namespace tsylv {

// Order-2 solvers for coefficients already in (generalized) Schur form:
//
//   solve_sylvester_tri:  A1 X + X A2^H = B
//   solve_gsylv_tri:      A1 X + C X A2^H = B
//
// A2^H is the conjugate transpose; real instances read as plain transpose.
// (Tensor-equation callers that want X A2^T on the complex path pass
// conj(A2).)  Both recurse by halving the larger axis -- never through a
// 2x2 block of a real quasi-triangular coefficient -- and bottom out in an
// assembled Kronecker system of order at most n_min^2, solved by
// block_back_substitution.

namespace detail {

template <typename T>
struct Sylv2Context {
  const Matrix<T>& a1;
  const Matrix<T>* c; // nullptr: plain Sylvester (C = I)
  const Matrix<T>& a2;
  Matrix<T>& x; // holds B on entry, the solution on exit
  int n_min = 32;
  bool all_triangular = false; // strictly triangular coefficients
};

// Split index for the range [lo, hi), nudged off a 2x2 diagonal block
// boundary; returns hi when the range cannot be split there.
template <typename T>
int split_index(const Matrix<T>& m, int lo, int hi) {
  int k = lo + (hi - lo) / 2;
  if constexpr (!is_complex_v<T>) {
    if (m(k, k - 1) != T{}) ++k;
  }
  return k;
}

// Dense base case on the window rows [r0,r1) x cols [c0,c1): assemble
//   kron(conj(A2_blk), C_blk or I) + kron(I, A1_blk)
// over the locally vectorized unknowns and back-substitute.
template <typename T>
void sylv2_base(Sylv2Context<T>& ctx, int r0, int r1, int c0, int c1) {
  const int nr = r1 - r0, nc = c1 - c0;
  const int n = nr * nc;
  Matrix<T> op(n, n);
  for (int j2 = 0; j2 < nc; ++j2) {
    const int ilim = std::min(j2 + 2, nc); // quasi-triangular reach
    for (int i2 = 0; i2 < ilim; ++i2) {
      const T v = conjugate(ctx.a2(c0 + i2, c0 + j2));
      if (v == T{}) continue;
      if (ctx.c) {
        const Matrix<T>& c = *ctx.c;
        for (int jc = 0; jc < nr; ++jc)
          for (int ic = 0; ic <= jc; ++ic)
            op(i2 * nr + ic, j2 * nr + jc) += v * c(r0 + ic, r0 + jc);
      } else {
        for (int t = 0; t < nr; ++t) op(i2 * nr + t, j2 * nr + t) += v;
      }
    }
  }
  for (int j2 = 0; j2 < nc; ++j2)
    for (int j1 = 0; j1 < nr; ++j1) {
      const int ilim = std::min(j1 + 2, nr);
      for (int i1 = 0; i1 < ilim; ++i1)
        op(j2 * nr + i1, j2 * nr + j1) += ctx.a1(r0 + i1, r0 + j1);
    }

  std::vector<T> rhs(n);
  for (int j = 0; j < nc; ++j)
    std::copy_n(&ctx.x(r0, c0 + j), nr, rhs.data() + static_cast<std::size_t>(j) * nr);

  std::vector<T> sol;
  if (ctx.all_triangular) {
    sol = block_back_substitution(op, std::move(rhs));
  } else {
    const std::vector<int> part = lower_block_partition(op);
    sol = block_back_substitution(op, std::move(rhs), part);
  }
  for (int j = 0; j < nc; ++j)
    std::copy_n(sol.data() + static_cast<std::size_t>(j) * nr, nr,
                &ctx.x(r0, c0 + j));
}

template <typename T>
void sylv2_solve(Sylv2Context<T>& ctx, int r0, int r1, int c0, int c1) {
  const int nr = r1 - r0, nc = c1 - c0;
  const int ldx = ctx.x.rows();
  const int ld1 = ctx.a1.rows();
  const int ld2 = ctx.a2.rows();

  // Pick the split: larger axis first (rows on ties), skipping axes whose
  // midpoint falls on an irreducible 2x2 block edge.
  bool split_rows;
  int k = 0;
  const bool rows_allowed = nr > ctx.n_min;
  const bool cols_allowed = nc > ctx.n_min;
  if (!rows_allowed && !cols_allowed) {
    sylv2_base(ctx, r0, r1, c0, c1);
    return;
  }
  split_rows = nr >= nc ? rows_allowed : !cols_allowed;
  k = split_rows ? split_index(ctx.a1, r0, r1) : split_index(ctx.a2, c0, c1);
  if (k == (split_rows ? r1 : c1)) { // 2x2 block at the end: try the other axis
    const bool other_allowed = split_rows ? cols_allowed : rows_allowed;
    if (other_allowed) {
      split_rows = !split_rows;
      k = split_rows ? split_index(ctx.a1, r0, r1) : split_index(ctx.a2, c0, c1);
    }
    if (k == (split_rows ? r1 : c1)) {
      sylv2_base(ctx, r0, r1, c0, c1);
      return;
    }
  }

  if (split_rows) {
    // Bottom rows decouple; their solution feeds the top block's rhs.
    sylv2_solve(ctx, k, r1, c0, c1);
    gemm('N', 'N', k - r0, nc, r1 - k, T(-1), &ctx.a1(r0, k), ld1,
         &ctx.x(k, c0), ldx, T(1), &ctx.x(r0, c0), ldx);
    if (ctx.c) {
      // B1 -= C_12 * (X2 * A2_blk^H)
      Matrix<T> t(r1 - k, nc);
      gemm('N', 'C', r1 - k, nc, nc, T(1), &ctx.x(k, c0), ldx,
           &ctx.a2(c0, c0), ld2, T(0), t.data(), r1 - k);
      gemm('N', 'N', k - r0, nc, r1 - k, T(-1), &(*ctx.c)(r0, k),
           ctx.c->rows(), t.data(), r1 - k, T(1), &ctx.x(r0, c0), ldx);
    }
    sylv2_solve(ctx, r0, k, c0, c1);
  } else {
    // Right columns decouple (A2^H is lower triangular).
    sylv2_solve(ctx, r0, r1, k, c1);
    if (ctx.c) {
      // B1 -= C_blk * (Y2 * A2_12^H)
      Matrix<T> t(nr, k - c0);
      gemm('N', 'C', nr, k - c0, c1 - k, T(1), &ctx.x(r0, k), ldx,
           &ctx.a2(c0, k), ld2, T(0), t.data(), nr);
      gemm('N', 'N', nr, k - c0, nr, T(-1), &(*ctx.c)(r0, r0), ctx.c->rows(),
           t.data(), nr, T(1), &ctx.x(r0, c0), ldx);
    } else {
      gemm('N', 'C', nr, k - c0, c1 - k, T(-1), &ctx.x(r0, k), ldx,
           &ctx.a2(c0, k), ld2, T(1), &ctx.x(r0, c0), ldx);
    }
    sylv2_solve(ctx, r0, r1, c0, k);
  }
}

template <typename T>
void sylv2_validate(const Matrix<T>& a1, const Matrix<T>* c,
                    const Matrix<T>& a2, const Matrix<T>& b, int n_min,
                    const char* who) {
  if (n_min < 1)
    throw dimension_error(std::string(who) + ": n_min must be >= 1");
  if (a1.rows() != a1.cols() || a2.rows() != a2.cols())
    throw dimension_error(std::string(who) + ": coefficients must be square");
  if (b.rows() != a1.rows() || b.cols() != a2.rows())
    throw dimension_error(std::string(who) + ": rhs is " +
                          std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()) + ", expected " +
                          std::to_string(a1.rows()) + "x" +
                          std::to_string(a2.rows()));
  if (b.rows() == 0 || b.cols() == 0)
    throw dimension_error(std::string(who) + ": empty system");
  const bool quasi_ok = !is_complex_v<T>;
  auto check = [&](const Matrix<T>& m, const char* name, bool allow_quasi) {
    if (is_upper_triangular(m)) return;
    if (allow_quasi && is_upper_quasi_triangular(m)) return;
    throw dimension_error(std::string(who) + ": " + name +
                          (allow_quasi ? " must be upper quasi-triangular"
                                       : " must be upper triangular"));
  };
  check(a1, "A1", quasi_ok);
  check(a2, "A2", quasi_ok);
  if (c) check(*c, "C", false);
}

} // namespace detail

// A1 X + X A2^H = B with (quasi-)triangular A1, A2.  Throws singular_error
// (with the eigenvalue-pair witness) if some lambda_i(A1) + conj(lambda_j(A2))
// vanishes numerically.
template <typename T>
Matrix<T> solve_sylvester_tri(const Matrix<T>& a1, const Matrix<T>& a2,
                              Matrix<T> b, int n_min = 32) {
  detail::sylv2_validate(a1, static_cast<const Matrix<T>*>(nullptr), a2, b,
                         n_min, "solve_sylvester_tri");
  std::vector<std::vector<std::complex<double>>> eigs(2);
  eigs[0] = quasi_tri_eigenvalues(a1);
  eigs[1] = quasi_tri_eigenvalues(a2);
  for (auto& v : eigs[1]) v = std::conj(v);
  const double tol =
      unit_roundoff<double> * (a1.frobenius_norm() + a2.frobenius_norm());
  Solvability s = detail::min_kron_sum(eigs);
  if (s.min_abs <= tol)
    throw singular_error(detail::witness_message("solve_sylvester_tri", s),
                         s.witness, s.witness_values, s.min_abs);

  detail::Sylv2Context<T> ctx{a1, nullptr, a2, b, n_min,
                              is_upper_triangular(a1) &&
                                  is_upper_triangular(a2)};
  detail::sylv2_solve(ctx, 0, b.rows(), 0, b.cols());
  return b;
}

// A1 X + C X A2^H = B with (A1, C) a regular pencil in generalized Schur
// form (A1 quasi-triangular, C triangular) and A2 (quasi-)triangular.
template <typename T>
Matrix<T> solve_gsylv_tri(const Matrix<T>& a1, const Matrix<T>& c,
                          const Matrix<T>& a2, Matrix<T> b, int n_min = 32) {
  detail::sylv2_validate(a1, &c, a2, b, n_min, "solve_gsylv_tri");
  if (c.rows() != a1.rows())
    throw dimension_error("solve_gsylv_tri: C must match A1");
  std::vector<std::vector<std::complex<double>>> tail(1);
  tail[0] = quasi_tri_eigenvalues(a2);
  for (auto& v : tail[0]) v = std::conj(v);
  const double tol = unit_roundoff<double> *
                     (a1.frobenius_norm() + c.frobenius_norm() +
                      a2.frobenius_norm());
  Solvability s = detail::min_pencil_product(a1, c, tail);
  if (s.min_abs <= tol)
    throw singular_error(detail::witness_message("solve_gsylv_tri", s),
                         s.witness, s.witness_values, s.min_abs);

  detail::Sylv2Context<T> ctx{a1, &c, a2, b, n_min,
                              is_upper_triangular(a1) &&
                                  is_upper_triangular(a2)};
  detail::sylv2_solve(ctx, 0, b.rows(), 0, b.cols());
  return b;
}

} // namespace tsylv
