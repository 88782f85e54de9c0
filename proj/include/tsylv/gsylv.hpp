#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tsylv/config.hpp"
#include "tsylv/kernels.hpp"
#include "tsylv/laplace.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/oracle.hpp"
#include "tsylv/problems.hpp"
#include "tsylv/solvability.hpp"
#include "tsylv/sylvester.hpp"
#include "tsylv/tensor.hpp"

namespace tsylv {

// Solvers for X x_0 A_0 + X x_0 C x_1 A_1 ... x_{d-1} A_{d-1} = B.  The
// pipeline (solve_gsylv) reduces (A_0, C) with a generalized Schur
// decomposition and every other coefficient with an ordinary one, solves the
// reduced equation, and transforms back.  The reduced-form solvers are also
// public: A_0 and the tail coefficients must be upper (quasi-)triangular and
// C strictly upper triangular.

// The operator spectrum consists of the eigenvalues of A_0 + z C over every
// product z of one eigenvalue per tail coefficient.  The equation is
// solvable iff none of them vanish.  tol <= 0 picks u * sum of norms.
template <typename T>
Solvability check_solvable_gsylv(const std::vector<Matrix<T>>& coeffs,
                                 const Matrix<T>& c, double tol = 0) {
  if (coeffs.size() < 2)
    throw dimension_error("check_solvable_gsylv: need at least two modes");
  if (c.rows() != coeffs[0].rows() || c.cols() != coeffs[0].cols())
    throw dimension_error("check_solvable_gsylv: C must match A_0");
  if (!is_upper_triangular(c))
    throw dimension_error("check_solvable_gsylv: C must be upper triangular");
  double scale = coeffs[0].frobenius_norm() + c.frobenius_norm();
  std::vector<std::vector<std::complex<double>>> tails;
  for (std::size_t m = 1; m < coeffs.size(); ++m) {
    tails.push_back(quasi_tri_eigenvalues(coeffs[m]));
    scale += coeffs[m].frobenius_norm();
  }
  if (tol <= 0) tol = unit_roundoff<double> * scale;
  Solvability s = detail::min_pencil_product(coeffs[0], c, tails);
  s.solvable = s.min_abs > tol;
  return s;
}

namespace detail {

template <typename T>
struct GsCtx {
  const std::vector<Matrix<T>>& a;
  const Matrix<T>& c;
  int n_min;
  bool all_triangular;
};

template <typename T>
Matrix<T> window_block(const Matrix<T>& m, const Window& w) {
  return m.block(w.first, w.second, w.first, w.second);
}

// Assembled base case over the current windows: the mode-0 term I (x) A_0
// plus the Kronecker chain A_{d-1} (x) ... (x) A_1 (x) C.
template <typename T>
Tensor<T> gsylv_base(const GsCtx<T>& ctx, const std::vector<Window>& win,
                     Tensor<T> b) {
  const int big = static_cast<int>(b.size());
  Matrix<T> op = window_block(ctx.c, win[0]);
  for (std::size_t m = 1; m < win.size(); ++m)
    op = kron(window_block(ctx.a[m], win[m]), op);
  const int lo = win[0].first, n0 = win[0].second - lo;
  for (int r = 0; r < big / n0; ++r)
    for (int j = 0; j < n0; ++j) {
      const int ilim = std::min(j + 2, n0); // quasi-triangular reach
      for (int i = 0; i < ilim; ++i) {
        const T v = ctx.a[0](lo + i, lo + j);
        if (v != T{}) op(r * n0 + i, r * n0 + j) += v;
      }
    }
  std::vector<int> dims = b.dims();
  std::vector<T> sol;
  if (ctx.all_triangular) {
    sol = block_back_substitution(op, std::move(b).take_values());
  } else {
    const std::vector<int> part = lower_block_partition(op);
    sol = block_back_substitution(op, std::move(b).take_values(), part);
  }
  return Tensor<T>(std::move(dims), std::move(sol));
}

template <typename T>
Tensor<T> gs_rec(const GsCtx<T>& ctx, std::vector<Window> win, Tensor<T> b) {
  const auto [mu, k] = pick_split(ctx.a, win, ctx.n_min);
  if (mu < 0) return gsylv_base(ctx, win, std::move(b));
  const auto [lo, hi] = win[mu];
  const int d = static_cast<int>(win.size());

  auto [b1, b2] = mode_split(b, mu, k - lo);
  std::vector<Window> win2 = win;
  win2[mu] = {k, hi};
  Tensor<T> x2 = gs_rec(ctx, win2, std::move(b2));

  // The solved trailing block feeds back into the leading one.  Splitting
  // mode 0 splits both A_0 and C, so two terms cross the cut; splitting a
  // tail mode only the product term does.
  if (mu == 0) {
    b1 -= mode_multiply(x2, ctx.a[0].block(lo, k, k, hi), 0);
    Tensor<T> t = mode_multiply(x2, ctx.c.block(lo, k, k, hi), 0);
    for (int m = 1; m < d; ++m)
      t = mode_multiply(t, window_block(ctx.a[m], win[m]), m);
    b1 -= t;
  } else {
    Tensor<T> t = mode_multiply(x2, ctx.a[mu].block(lo, k, k, hi), mu);
    t = mode_multiply(t, window_block(ctx.c, win[0]), 0);
    for (int m = 1; m < d; ++m)
      if (m != mu) t = mode_multiply(t, window_block(ctx.a[m], win[m]), m);
    b1 -= t;
  }

  win[mu] = {lo, k};
  Tensor<T> x1 = gs_rec(ctx, std::move(win), std::move(b1));
  return mode_concat(x1, x2, mu);
}

template <typename T>
void require_reduced_gsylv(const std::vector<Matrix<T>>& coeffs,
                           const Matrix<T>& c, const Tensor<T>& b, int n_min,
                           bool strict_triangular, const char* who) {
  require_reduced(coeffs, b, n_min, strict_triangular, who);
  if (coeffs.size() < 2)
    throw dimension_error(std::string(who) + ": need at least two modes");
  if (c.rows() != coeffs[0].rows() || c.cols() != coeffs[0].cols())
    throw dimension_error(std::string(who) + ": C must match A_0");
  if (!is_upper_triangular(c))
    throw dimension_error(std::string(who) + ": C must be upper triangular");
}

} // namespace detail

// Reduced-form solver, recursion only: splits the largest mode (never
// through a 2x2 block) until every extent is at most n_min, then solves the
// assembled base system.  A_0 and the tail coefficients must be upper
// (quasi-)triangular, C upper triangular.
template <typename T>
Tensor<T> gsylv_recursive(const std::vector<Matrix<T>>& coeffs,
                          const Matrix<T>& c, Tensor<T> b, int n_min) {
  detail::require_reduced_gsylv(coeffs, c, b, n_min, false, "gsylv_recursive");
  bool all_tri = true;
  for (const auto& a : coeffs) all_tri = all_tri && is_upper_triangular(a);
  detail::GsCtx<T> ctx{coeffs, c, n_min, all_tri};
  std::vector<detail::Window> win;
  for (const auto& a : coeffs) win.emplace_back(0, a.rows());
  return detail::gs_rec(ctx, std::move(win), std::move(b));
}

// Reduced-form solver with mode merging: once n_{d-2}*n_{d-1} fits within
// n_min^2 the last two modes fuse -- their Kronecker product becomes the new
// trailing coefficient and the data is merely reshaped -- recursing until an
// order-2 equation remains for the two-sided matrix solver.  Larger windows
// are split first.  Requires strictly triangular coefficients (complex
// Schur / generalized Schur forms).
template <typename T>
Tensor<T> gsylv_merged(std::vector<Matrix<T>> coeffs, Matrix<T> c, Tensor<T> b,
                       int n_min) {
  detail::require_reduced_gsylv(coeffs, c, b, n_min, true, "gsylv_merged");
  const int d = static_cast<int>(coeffs.size());
  if (d == 2) {
    // The matrix solver blocks on its own scale: n_min here is the merge
    // cutoff, which would make the base systems needlessly large.
    Matrix<T> x =
        solve_gsylv_tri(coeffs[0], c, conjugated(coeffs[1]),
                        matrix_from_tensor(std::move(b)),
                        std::min(n_min, matrix_floor_n_min));
    return tensor_from_matrix(x);
  }
  const int nl = coeffs[d - 2].rows(), nr = coeffs[d - 1].rows();
  if (static_cast<long long>(nl) * nr <=
      static_cast<long long>(n_min) * n_min) {
    Matrix<T> merged = kron(coeffs[d - 1], coeffs[d - 2]);
    Tensor<T> bm = merge_modes(std::move(b), d - 2);
    std::vector<Matrix<T>> rest(coeffs.begin(), coeffs.end() - 2);
    rest.push_back(std::move(merged));
    Tensor<T> xm =
        gsylv_merged(std::move(rest), std::move(c), std::move(bm), n_min);
    return unmerge_modes(std::move(xm), d - 2, nl, nr);
  }
  // Split the largest mode and recurse on both halves.
  int mu = 0;
  for (int m = 1; m < d; ++m)
    if (coeffs[m].rows() > coeffs[mu].rows()) mu = m;
  const int n = coeffs[mu].rows();
  const int k = n / 2;
  auto [b1, b2] = mode_split(b, mu, k);

  if (mu == 0) {
    std::vector<Matrix<T>> tail = coeffs;
    tail[0] = coeffs[0].block(k, n, k, n);
    Tensor<T> x2 = gsylv_merged(std::move(tail), c.block(k, n, k, n),
                                std::move(b2), n_min);

    b1 -= mode_multiply(x2, coeffs[0].block(0, k, k, n), 0);
    Tensor<T> t = mode_multiply(x2, c.block(0, k, k, n), 0);
    for (int m = 1; m < d; ++m) t = mode_multiply(t, coeffs[m], m);
    b1 -= t;

    std::vector<Matrix<T>> head = std::move(coeffs);
    head[0] = head[0].block(0, k, 0, k);
    Tensor<T> x1 = gsylv_merged(std::move(head), c.block(0, k, 0, k),
                                std::move(b1), n_min);
    return mode_concat(x1, x2, 0);
  }
  std::vector<Matrix<T>> tail = coeffs;
  tail[mu] = coeffs[mu].block(k, n, k, n);
  Tensor<T> x2 = gsylv_merged(std::move(tail), c, std::move(b2), n_min);

  Tensor<T> t = mode_multiply(x2, coeffs[mu].block(0, k, k, n), mu);
  t = mode_multiply(t, c, 0);
  for (int m = 1; m < d; ++m)
    if (m != mu) t = mode_multiply(t, coeffs[m], m);
  b1 -= t;

  std::vector<Matrix<T>> head = std::move(coeffs);
  head[mu] = head[mu].block(0, k, 0, k);
  Tensor<T> x1 =
      gsylv_merged(std::move(head), std::move(c), std::move(b1), n_min);
  return mode_concat(x1, x2, mu);
}

namespace detail {

template <typename W, typename T>
SolveReport<W> gsylv_pipeline(const GSylvProblem<T>& p,
                              const SolverConfig& cfg) {
  const int d = p.order();
  const int n_min =
      cfg.n_min > 0 ? cfg.n_min : default_n_min(Family::gsylv, d, cfg.strategy);
  SolveReport<W> rep;
  rep.n_min = n_min;
  rep.strategy = cfg.strategy;

  StopWatch sw;
  // (A_0, C) share the row space, so they are reduced together:
  // A_0 = U S Z^H and C = U T Z^H with S, T upper (quasi-)triangular.
  GeneralizedSchurFactorization<W> gf = [&] {
    if constexpr (std::is_same_v<W, T>)
      return qz(p.coeffs[0], p.c);
    else
      return qz(complexified(p.coeffs[0]), complexified(p.c));
  }();
  std::vector<SchurFactorization<W>> fact; // tail modes 1..d-1
  std::vector<Matrix<W>> reduced;
  reduced.push_back(gf.s);
  for (int m = 1; m < d; ++m) {
    if constexpr (std::is_same_v<W, T>)
      fact.push_back(schur(p.coeffs[m]));
    else
      fact.push_back(schur(complexified(p.coeffs[m])));
    reduced.push_back(fact.back().t);
  }
  rep.timings.reduction_s = sw.lap();

  Solvability s = check_solvable_gsylv(reduced, gf.t, cfg.singularity_tol);
  if (!s.solvable)
    throw singular_error(witness_message("solve_gsylv", s), s.witness,
                         s.witness_values, s.min_abs);

  Tensor<W> bt = [&] {
    if constexpr (std::is_same_v<W, T>)
      return p.rhs;
    else
      return complexified(p.rhs);
  }();
  bt = mode_multiply(bt, adjoint(gf.u), 0);
  for (int m = 1; m < d; ++m)
    bt = mode_multiply(bt, adjoint(fact[m - 1].u), m);

  Tensor<W> xt;
  if (d == 2) {
    Matrix<W> x0 =
        solve_gsylv_tri(reduced[0], gf.t, conjugated(reduced[1]),
                        matrix_from_tensor(std::move(bt)), n_min);
    xt = tensor_from_matrix(x0);
  } else if (cfg.strategy == Strategy::merge) {
    xt = gsylv_merged(std::move(reduced), gf.t, std::move(bt), n_min);
  } else {
    xt = gsylv_recursive(reduced, gf.t, std::move(bt), n_min);
  }
  rep.timings.recursion_s = sw.lap();

  // A_0 and C were reduced by a right factor Z, every tail mode by U_m.
  xt = mode_multiply(xt, gf.z, 0);
  for (int m = 1; m < d; ++m) xt = mode_multiply(xt, fact[m - 1].u, m);
  rep.timings.back_transform_s = sw.lap();

  rep.solution = std::move(xt);
  return rep;
}

} // namespace detail

// Full pipeline: generalized Schur on (A_0, C), ordinary Schur on the tail
// coefficients, solvability check, reduced solve (strategy of choice), back
// transformation, and the residual of the returned solution.  Real input
// with complex arithmetic (the default) drops the imaginary dust of the
// back-transformed solution and reports its magnitude.
template <typename T>
SolveReport<T> solve_gsylv(const GSylvProblem<T>& p,
                           const SolverConfig& cfg = {}) {
  validate(p);
  detail::check_config(cfg, !is_complex_v<T>, "solve_gsylv");
  SolveReport<T> rep;
  if constexpr (is_complex_v<T>) {
    rep = detail::gsylv_pipeline<Complex>(p, cfg);
  } else if (cfg.arithmetic == Arithmetic::complex_triangular) {
    SolveReport<Complex> wrep = detail::gsylv_pipeline<Complex>(p, cfg);
    rep.discarded_imag = max_imag(wrep.solution);
    rep.solution = real_part(wrep.solution);
    rep.timings = wrep.timings;
    rep.n_min = wrep.n_min;
    rep.strategy = wrep.strategy;
  } else {
    rep = detail::gsylv_pipeline<double>(p, cfg);
  }
  rep.residual = oracle::residual(p, rep.solution);
  return rep;
}

} // namespace tsylv
