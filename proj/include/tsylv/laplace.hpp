#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tsylv/config.hpp"
#include "tsylv/kernels.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/oracle.hpp"
#include "tsylv/problems.hpp"
#include "tsylv/solvability.hpp"
#include "tsylv/sylvester.hpp"
#include "tsylv/tensor.hpp"

namespace tsylv {

// Solvers for sum_m X x_m A_m = B.  The full pipeline (solve_laplace)
// reduces every coefficient to Schur form, solves the reduced equation with
// one of the two strategies below, and transforms back.  The reduced-form
// solvers are also public: they require (quasi-)triangular coefficients.

// The Kronecker sum has an eigenvalue for every way of picking one
// eigenvalue per mode; the equation is solvable iff no such sum vanishes.
// Reports the smallest one found together with its slot tuple.  tol <= 0
// picks u * sum of coefficient norms.
template <typename T>
Solvability check_solvable_laplace(const std::vector<Matrix<T>>& coeffs,
                                   double tol = 0) {
  if (coeffs.empty())
    throw dimension_error("check_solvable_laplace: no coefficients");
  std::vector<std::vector<std::complex<double>>> eigs;
  double scale = 0;
  for (const auto& a : coeffs) {
    eigs.push_back(quasi_tri_eigenvalues(a)); // validates quasi-triangular
    scale += a.frobenius_norm();
  }
  if (tol <= 0) tol = unit_roundoff<double> * scale;
  Solvability s = detail::min_kron_sum(eigs);
  s.solvable = s.min_abs > tol;
  return s;
}

// I_{n2} (x) A1 + A2 (x) I_{n1}: the order-(n1*n2) coefficient of the fused
// mode pair.  Upper triangular inputs give an upper triangular result.
template <typename T>
Matrix<T> merge_pair(const Matrix<T>& a1, const Matrix<T>& a2) {
  if (a1.rows() != a1.cols() || a2.rows() != a2.cols())
    throw dimension_error("merge_pair: coefficients must be square");
  const int n1 = a1.rows(), n2 = a2.rows();
  Matrix<T> out(n1 * n2, n1 * n2);
  for (int j2 = 0; j2 < n2; ++j2) {
    for (int i2 = 0; i2 < n2; ++i2) {
      const T v = a2(i2, j2);
      if (v == T{}) continue;
      for (int t = 0; t < n1; ++t) out(i2 * n1 + t, j2 * n1 + t) += v;
    }
    for (int j1 = 0; j1 < n1; ++j1)
      for (int i1 = 0; i1 < n1; ++i1) {
        const T v = a1(i1, j1);
        if (v != T{}) out(j2 * n1 + i1, j2 * n1 + j1) += v;
      }
  }
  return out;
}

namespace detail {

template <typename T>
struct LapCtx {
  const std::vector<Matrix<T>>& a;
  int n_min;
  bool all_triangular;
};

using Window = std::pair<int, int>; // half-open coefficient range per mode

// Largest splittable mode: size > n_min and the midpoint not pinned inside a
// 2x2 block; ties prefer the smaller mode index.  Returns (mode, split) or
// mode = -1 when the window must be solved as a base case.
template <typename T>
std::pair<int, int> pick_split(const std::vector<Matrix<T>>& a,
                               const std::vector<Window>& win, int n_min) {
  int best = -1, best_size = n_min, best_k = -1;
  for (int m = 0; m < static_cast<int>(win.size()); ++m) {
    const int size = win[m].second - win[m].first;
    if (size <= best_size) continue;
    const int k = split_index(a[m], win[m].first, win[m].second);
    if (k == win[m].second) continue; // lone 2x2 block
    best = m;
    best_size = size;
    best_k = k;
  }
  return {best, best_k};
}

// Assembled Kronecker-sum base case over the current windows.
template <typename T>
Tensor<T> lap_base(const LapCtx<T>& ctx, const std::vector<Window>& win,
                   Tensor<T> b) {
  const int big = static_cast<int>(b.size());
  Matrix<T> op(big, big);
  std::size_t stride = 1;
  for (std::size_t m = 0; m < win.size(); ++m) {
    const auto& a = ctx.a[m];
    const int lo = win[m].first, n = win[m].second - lo;
    const std::size_t outer = static_cast<std::size_t>(big) / (stride * n);
    for (std::size_t o = 0; o < outer; ++o)
      for (int j = 0; j < n; ++j) {
        const int ilim = std::min(j + 2, n); // quasi-triangular reach
        for (int i = 0; i < ilim; ++i) {
          const T v = a(lo + i, lo + j);
          if (v == T{}) continue;
          const std::size_t rb = o * stride * n + static_cast<std::size_t>(i) * stride;
          const std::size_t cb = o * stride * n + static_cast<std::size_t>(j) * stride;
          for (std::size_t in = 0; in < stride; ++in)
            op(static_cast<int>(rb + in), static_cast<int>(cb + in)) += v;
        }
      }
    stride *= n;
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
Tensor<T> lap_rec(const LapCtx<T>& ctx, std::vector<Window> win, Tensor<T> b) {
  const auto [mu, k] = pick_split(ctx.a, win, ctx.n_min);
  if (mu < 0) return lap_base(ctx, win, std::move(b));
  const auto [lo, hi] = win[mu];

  auto [b1, b2] = mode_split(b, mu, k - lo);
  std::vector<Window> win2 = win;
  win2[mu] = {k, hi};
  Tensor<T> x2 = lap_rec(ctx, win2, std::move(b2));

  // The solved trailing block feeds back into the leading one through the
  // coefficient's upper off-diagonal block.
  b1 -= mode_multiply(x2, ctx.a[mu].block(lo, k, k, hi), mu);

  std::vector<Window> win1 = win;
  win1[mu] = {lo, k};
  Tensor<T> x1 = lap_rec(ctx, win1, std::move(b1));
  return mode_concat(x1, x2, mu);
}

template <typename T>
void require_reduced(const std::vector<Matrix<T>>& coeffs, const Tensor<T>& b,
                     int n_min, bool strict_triangular, const char* who) {
  if (n_min < 1)
    throw dimension_error(std::string(who) + ": n_min must be >= 1");
  if (coeffs.empty() || b.order() != static_cast<int>(coeffs.size()))
    throw dimension_error(std::string(who) +
                          ": rhs order does not match coefficient count");
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    if (coeffs[m].rows() != coeffs[m].cols() ||
        coeffs[m].rows() != b.dim(static_cast<int>(m)))
      throw dimension_error(std::string(who) + ": coefficient " +
                            std::to_string(m) + " does not match rhs");
    const bool ok = strict_triangular
                        ? is_upper_triangular(coeffs[m])
                        : is_upper_quasi_triangular(coeffs[m]);
    if (!ok)
      throw dimension_error(std::string(who) + ": coefficient " +
                            std::to_string(m) +
                            (strict_triangular
                                 ? " must be upper triangular"
                                 : " must be upper quasi-triangular"));
  }
}

} // namespace detail

// Reduced-form solver, recursion only: splits the largest mode (never
// through a 2x2 block) until every extent is at most n_min, then solves the
// assembled base system.  Coefficients must be upper (quasi-)triangular.
template <typename T>
Tensor<T> laplace_recursive(const std::vector<Matrix<T>>& coeffs, Tensor<T> b,
                            int n_min) {
  detail::require_reduced(coeffs, b, n_min, false, "laplace_recursive");
  bool all_tri = true;
  for (const auto& a : coeffs) all_tri = all_tri && is_upper_triangular(a);
  detail::LapCtx<T> ctx{coeffs, n_min, all_tri};
  std::vector<detail::Window> win;
  for (const auto& a : coeffs) win.emplace_back(0, a.rows());
  return detail::lap_rec(ctx, std::move(win), std::move(b));
}

// Reduced-form solver with mode merging: once n_0*n_1 fits within n_min^2
// the first two modes fuse into one coefficient (merge_pair) -- a pure
// reshape of the data -- recursing until an order-2 equation remains.
// Larger windows are split first, as in laplace_recursive.  Requires
// strictly triangular coefficients (complex Schur forms).
template <typename T>
Tensor<T> laplace_merged(std::vector<Matrix<T>> coeffs, Tensor<T> b,
                         int n_min) {
  detail::require_reduced(coeffs, b, n_min, true, "laplace_merged");
  const int d = static_cast<int>(coeffs.size());
  if (d == 2) {
    // The matrix solver blocks on its own scale: n_min here is the merge
    // cutoff, which would make the base systems needlessly large.
    Matrix<T> x = solve_sylvester_tri(coeffs[0], conjugated(coeffs[1]),
                                      matrix_from_tensor(std::move(b)),
                                      std::min(n_min, matrix_floor_n_min));
    return tensor_from_matrix(x);
  }
  const int n0 = coeffs[0].rows(), n1 = coeffs[1].rows();
  if (static_cast<long long>(n0) * n1 <=
      static_cast<long long>(n_min) * n_min) {
    Matrix<T> merged = merge_pair(coeffs[0], coeffs[1]);
    Tensor<T> bm = merge_modes(std::move(b), 0);
    std::vector<Matrix<T>> rest;
    rest.push_back(std::move(merged));
    for (int m = 2; m < d; ++m) rest.push_back(std::move(coeffs[m]));
    Tensor<T> xm = laplace_merged(std::move(rest), std::move(bm), n_min);
    return unmerge_modes(std::move(xm), 0, n0, n1);
  }
  // Split the largest mode and recurse on both halves.
  int mu = 0;
  for (int m = 1; m < d; ++m)
    if (coeffs[m].rows() > coeffs[mu].rows()) mu = m;
  const int n = coeffs[mu].rows();
  const int k = n / 2;
  auto [b1, b2] = mode_split(b, mu, k);

  std::vector<Matrix<T>> tail = coeffs;
  tail[mu] = coeffs[mu].block(k, n, k, n);
  Tensor<T> x2 = laplace_merged(std::move(tail), std::move(b2), n_min);

  b1 -= mode_multiply(x2, coeffs[mu].block(0, k, k, n), mu);

  std::vector<Matrix<T>> head = std::move(coeffs);
  head[mu] = head[mu].block(0, k, 0, k);
  Tensor<T> x1 = laplace_merged(std::move(head), std::move(b1), n_min);
  return mode_concat(x1, x2, mu);
}

namespace detail {

template <typename W, typename T>
SolveReport<W> laplace_pipeline(const LaplaceProblem<T>& p,
                                const SolverConfig& cfg) {
  const int d = p.order();
  const int n_min =
      cfg.n_min > 0 ? cfg.n_min : default_n_min(Family::laplace, d, cfg.strategy);
  SolveReport<W> rep;
  rep.n_min = n_min;
  rep.strategy = cfg.strategy;

  StopWatch sw;
  std::vector<SchurFactorization<W>> fact;
  fact.reserve(d);
  std::vector<Matrix<W>> reduced;
  for (const auto& a : p.coeffs) {
    if constexpr (std::is_same_v<W, T>)
      fact.push_back(schur(a));
    else
      fact.push_back(schur(complexified(a)));
    reduced.push_back(fact.back().t);
  }
  rep.timings.reduction_s = sw.lap();

  Solvability s = check_solvable_laplace(reduced, cfg.singularity_tol);
  if (!s.solvable)
    throw singular_error(witness_message("solve_laplace", s), s.witness,
                         s.witness_values, s.min_abs);

  Tensor<W> bt = [&] {
    if constexpr (std::is_same_v<W, T>)
      return p.rhs;
    else
      return complexified(p.rhs);
  }();
  for (int m = 0; m < d; ++m) bt = mode_multiply(bt, adjoint(fact[m].u), m);

  Tensor<W> xt;
  if (d == 2) {
    Matrix<W> x0 =
        solve_sylvester_tri(reduced[0], conjugated(reduced[1]),
                            matrix_from_tensor(std::move(bt)), n_min);
    xt = tensor_from_matrix(x0);
  } else if (cfg.strategy == Strategy::merge) {
    xt = laplace_merged(std::move(reduced), std::move(bt), n_min);
  } else {
    xt = laplace_recursive(reduced, std::move(bt), n_min);
  }
  rep.timings.recursion_s = sw.lap();

  for (int m = 0; m < d; ++m) xt = mode_multiply(xt, fact[m].u, m);
  rep.timings.back_transform_s = sw.lap();

  rep.solution = std::move(xt);
  return rep;
}

inline void check_config(const SolverConfig& cfg, bool real_input,
                         const char* who) {
  if (cfg.strategy == Strategy::merge &&
      cfg.arithmetic == Arithmetic::real_quasitriangular)
    throw std::invalid_argument(
        std::string(who) +
        ": the merge strategy needs strictly triangular (complex Schur) "
        "coefficients; real quasi-triangular arithmetic cannot merge");
  if (!real_input && cfg.arithmetic == Arithmetic::real_quasitriangular)
    throw std::invalid_argument(std::string(who) +
                                ": real arithmetic requires real data");
}

} // namespace detail

// Full pipeline: Schur-reduce every coefficient, check solvability, solve
// the reduced equation (strategy of choice), transform back, and report the
// residual of the returned solution.  Real input with complex arithmetic
// (the default) drops the imaginary dust of the back-transformed solution
// and reports its magnitude.
template <typename T>
SolveReport<T> solve_laplace(const LaplaceProblem<T>& p,
                             const SolverConfig& cfg = {}) {
  validate(p);
  detail::check_config(cfg, !is_complex_v<T>, "solve_laplace");
  SolveReport<T> rep;
  if constexpr (is_complex_v<T>) {
    rep = detail::laplace_pipeline<Complex>(p, cfg);
  } else if (cfg.arithmetic == Arithmetic::complex_triangular) {
    SolveReport<Complex> wrep = detail::laplace_pipeline<Complex>(p, cfg);
    rep.discarded_imag = max_imag(wrep.solution);
    rep.solution = real_part(wrep.solution);
    rep.timings = wrep.timings;
    rep.n_min = wrep.n_min;
    rep.strategy = wrep.strategy;
  } else {
    rep = detail::laplace_pipeline<double>(p, cfg);
  }
  rep.residual = oracle::residual(p, rep.solution);
  return rep;
}

} // namespace tsylv
