#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "tsylv/errors.hpp"
#include "tsylv/gsylv.hpp"
#include "tsylv/oracle.hpp"
#include "tsylv/random.hpp"
#include "tsylv/sylvester.hpp"

using namespace tsylv;
using testutil::rel_diff;

namespace {

template <typename T>
Matrix<T> diag_matrix(const std::vector<T>& d) {
  Matrix<T> m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i)
    m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

// op(X) = X x_0 A_0 + X x_0 C x_1 A_1 ... computed term by term.
template <typename T>
Tensor<T> apply_gsylv(const GSylvProblem<T>& p, const Tensor<T>& x) {
  Tensor<T> out = mode_multiply(x, p.coeffs[0], 0);
  Tensor<T> t = mode_multiply(x, p.c, 0);
  for (int m = 1; m < p.order(); ++m) t = mode_multiply(t, p.coeffs[m], m);
  out += t;
  return out;
}

} // namespace

TEST_CASE("check_solvable_gsylv scans pencil eigenvalues over tail products") {
  SECTION("solvable") {
    std::vector<Matrix<double>> coeffs{diag_matrix<double>({4, 6}),
                                       diag_matrix<double>({2, 3})};
    Matrix<double> c = diag_matrix<double>({1, 1});
    Solvability s = check_solvable_gsylv(coeffs, c);
    CHECK(s.solvable);
    CHECK(s.min_abs == Catch::Approx(6.0)); // 4 + 1*2
    CHECK(s.witness == std::vector<int>{0, 0});
  }
  SECTION("singular: a_0 + c * product vanishes") {
    // 6 + 2 * (-3) = 0 at diagonal slot 1, tail slot 0.
    std::vector<Matrix<double>> coeffs{diag_matrix<double>({4, 6}),
                                       diag_matrix<double>({-3, 1})};
    Matrix<double> c = diag_matrix<double>({1, 2});
    Solvability s = check_solvable_gsylv(coeffs, c);
    CHECK_FALSE(s.solvable);
    CHECK(s.min_abs == Catch::Approx(0.0).margin(1e-15));
    CHECK(s.witness == std::vector<int>{1, 0});
    REQUIRE(s.witness_values.size() == 3);
    CHECK(s.witness_values[0] == Complex(6, 0));
    CHECK(s.witness_values[1] == Complex(2, 0));
    CHECK(s.witness_values[2] == Complex(-3, 0));
  }
  SECTION("rejects a non-triangular C") {
    std::vector<Matrix<double>> coeffs{diag_matrix<double>({1, 2}),
                                       diag_matrix<double>({1, 2})};
    Matrix<double> c(2, 2);
    c(0, 0) = c(1, 1) = 1;
    c(1, 0) = 0.5;
    CHECK_THROWS_AS(check_solvable_gsylv(coeffs, c), dimension_error);
  }
}

TEMPLATE_TEST_CASE("gsylv_recursive agrees with the assembled solve",
                   "[gsylv]", double, Complex) {
  RandomStream rng(2101);
  for (const auto& dims : std::vector<std::vector<int>>{
           {4, 5}, {5, 4, 3}, {3, 4, 2, 3}, {2, 2, 3, 2, 2}, {7, 3, 7}}) {
    GSylvProblem<TestType> p = random_reduced_gsylv<TestType>(rng, dims);
    Tensor<TestType> want = oracle::solve(p);
    for (int n_min : {1, 2, 4}) {
      Tensor<TestType> got = gsylv_recursive(p.coeffs, p.c, p.rhs, n_min);
      INFO("d=" << dims.size() << " n_min=" << n_min);
      CHECK(rel_diff(got, want) < 1e-9);
    }
  }
}

TEST_CASE("gsylv_recursive handles a quasi-triangular A_0 and tails") {
  RandomStream rng(2102);
  GSylvProblem<double> p;
  p.coeffs.push_back(randn_quasi_triangular(rng, 7, 1.0, 0.6));
  p.c = randn_triangular_ringdiag<double>(rng, 7, 0.05, 0.3);
  p.c *= 0.3;
  for (int n : {5, 6}) {
    Matrix<double> a = randn_quasi_triangular(rng, n, 0.0, 0.6);
    a *= 0.4;
    p.coeffs.push_back(a);
  }
  p.rhs = randn_tensor<double>(rng, {7, 5, 6});
  Tensor<double> want = oracle::solve(p);
  for (int n_min : {1, 3, 8})
    CHECK(rel_diff(gsylv_recursive(p.coeffs, p.c, p.rhs, n_min), want) < 1e-9);
}

TEST_CASE("gsylv_recursive coupling through dense C and off-diagonal blocks") {
  // Full upper-triangular coefficients (no block-diagonal special cases) so
  // every cross-block update term participates.
  RandomStream rng(2103);
  GSylvProblem<Complex> p;
  p.coeffs.push_back(randn_triangular<Complex>(rng, 6, 2.0));
  p.c = randn_triangular_ringdiag<Complex>(rng, 6, 0.2, 0.5);
  p.coeffs.push_back(randn_triangular_ringdiag<Complex>(rng, 4, 0.4, 0.9));
  p.coeffs.push_back(randn_triangular_ringdiag<Complex>(rng, 5, 0.4, 0.9));
  Tensor<Complex> x0 = randn_tensor<Complex>(rng, {6, 4, 5});
  p.rhs = apply_gsylv(p, x0);
  for (int n_min : {1, 2, 3})
    CHECK(rel_diff(gsylv_recursive(p.coeffs, p.c, p.rhs, n_min), x0) < 1e-9);
}

TEST_CASE("gsylv_recursive on two modes matches the two-sided matrix solver") {
  RandomStream rng(2104);
  Matrix<Complex> a0 = randn_triangular<Complex>(rng, 9, 3.0);
  Matrix<Complex> c = randn_triangular_ringdiag<Complex>(rng, 9, 0.1, 0.4);
  Matrix<Complex> a1 = randn_triangular_ringdiag<Complex>(rng, 7, 0.3, 0.9);
  Tensor<Complex> b = randn_tensor<Complex>(rng, {9, 7});
  // X x_0 A_0 + X x_0 C x_1 A_1 = B  <=>  A_0 X + C X A_1^T = B.
  Matrix<Complex> want = solve_gsylv_tri(a0, c, conjugated(a1),
                                         matrix_from_tensor(b), 3);
  Tensor<Complex> got = gsylv_recursive({a0, a1}, c, b, 3);
  CHECK(rel_diff(matrix_from_tensor(got), want) < 1e-11);
}

TEST_CASE("gsylv_merged agrees with recursion and the assembled solve") {
  RandomStream rng(2105);
  for (const auto& dims : std::vector<std::vector<int>>{
           {4, 5, 6}, {3, 4, 5, 3}, {2, 2, 3, 2, 2}}) {
    GSylvProblem<Complex> p = random_reduced_gsylv<Complex>(rng, dims);
    Tensor<Complex> want = oracle::solve(p);
    for (int n_min : {2, 3, 6}) {
      Tensor<Complex> got = gsylv_merged(p.coeffs, p.c, p.rhs, n_min);
      INFO("d=" << dims.size() << " n_min=" << n_min);
      CHECK(rel_diff(got, want) < 1e-9);
      CHECK(rel_diff(got, gsylv_recursive(p.coeffs, p.c, p.rhs, n_min)) <
            1e-9);
    }
  }
}

TEST_CASE("gsylv_merged requires strictly triangular coefficients") {
  RandomStream rng(2106);
  std::vector<Matrix<double>> coeffs;
  coeffs.push_back(randn_quasi_triangular(rng, 6, 1.0, 1.0));
  coeffs.push_back(randn_triangular<double>(rng, 4, 1.0));
  coeffs.push_back(randn_triangular<double>(rng, 3, 1.0));
  Matrix<double> c = randn_triangular_ringdiag<double>(rng, 6, 0.1, 0.3);
  Tensor<double> b = randn_tensor<double>(rng, {6, 4, 3});
  CHECK_THROWS_AS(gsylv_merged(coeffs, c, b, 2), dimension_error);
}

TEMPLATE_TEST_CASE("solve_gsylv full pipeline matches the assembled solve",
                   "[gsylv]", double, Complex) {
  RandomStream rng(2107);
  for (const auto& dims :
       std::vector<std::vector<int>>{{8, 7}, {6, 5, 4}, {4, 3, 4, 3}}) {
    GSylvProblem<TestType> p = random_gsylv_problem<TestType>(rng, dims);
    Tensor<TestType> want = oracle::solve(p);
    for (Strategy strat : {Strategy::recursion_only, Strategy::merge}) {
      SolverConfig cfg;
      cfg.strategy = strat;
      cfg.n_min = 3;
      SolveReport<TestType> rep = solve_gsylv(p, cfg);
      INFO("d=" << dims.size() << " strategy=" << to_string(strat));
      CHECK(rel_diff(rep.solution, want) < 1e-9);
      CHECK(rep.residual < 1e-12);
      if (!is_complex_v<TestType>) CHECK(rep.discarded_imag < 1e-9);
    }
  }
}

TEST_CASE("solve_gsylv real quasi-triangular arithmetic stays real") {
  RandomStream rng(2108);
  GSylvProblem<double> p = random_gsylv_problem<double>(rng, {7, 6, 5});
  Tensor<double> want = oracle::solve(p);
  SolverConfig cfg;
  cfg.strategy = Strategy::recursion_only;
  cfg.arithmetic = Arithmetic::real_quasitriangular;
  SolveReport<double> rep = solve_gsylv(p, cfg);
  CHECK(rel_diff(rep.solution, want) < 1e-9);
  CHECK(rep.residual < 1e-12);
  CHECK(rep.discarded_imag == 0.0);
  CHECK(rep.n_min == default_n_min(Family::gsylv, 3, cfg.strategy));
}

TEST_CASE("solve_gsylv rejects inconsistent configurations") {
  RandomStream rng(2109);
  GSylvProblem<Complex> pc = random_gsylv_problem<Complex>(rng, {4, 4, 4});
  SolverConfig cfg;
  cfg.arithmetic = Arithmetic::real_quasitriangular;
  cfg.strategy = Strategy::recursion_only;
  CHECK_THROWS_AS(solve_gsylv(pc, cfg), std::invalid_argument);
}

TEST_CASE("solve_gsylv reports a singular pencil combination") {
  // A_0 = -2 I and C = I with tail spectra {1, 3} x {2/3}: the tail product
  // 3 * 2/3 = 2 cancels the shift.  Witnesses survive Schur reduction only
  // up to reordering, so they are checked by value.
  Matrix<double> a1(2, 2), a2(1, 1);
  a1(0, 0) = 2;
  a1(0, 1) = 1;
  a1(1, 0) = 1;
  a1(1, 1) = 2; // eigenvalues 1 and 3
  a2(0, 0) = 2.0 / 3.0;
  Matrix<double> a0 = Matrix<double>::identity(2);
  a0 *= -2.0;
  GSylvProblem<double> p;
  p.coeffs = {a0, a1, a2};
  p.c = Matrix<double>::identity(2);
  p.rhs = Tensor<double>({2, 2, 1});
  p.rhs(0, 0, 0) = 1;
  SolverConfig cfg;
  cfg.singularity_tol = 1e-10; // the witness itself carries O(u) roundoff
  try {
    solve_gsylv(p, cfg);
    FAIL("expected singular_error");
  } catch (const singular_error& e) {
    CHECK(e.min_abs() < 1e-12);
    REQUIRE(e.values().size() == 4);
    // a_0 diagonal entry + c diagonal entry * tail product ~ 0.
    const Complex combo =
        e.values()[0] + e.values()[1] * e.values()[2] * e.values()[3];
    CHECK(std::abs(combo) < 1e-10);
  }
}

TEST_CASE("shifted Kronecker systems route through the two-term solver") {
  // (A_1 (x) C - lambda I) vec(X) = vec(B) posed with A_0 = -lambda I.
  // With A_1 = C = I and lambda = -1 the operator is 2 I, so X = B / 2.
  Matrix<double> id = Matrix<double>::identity(3);
  RandomStream rng(2110);
  Tensor<double> b = randn_tensor<double>(rng, {3, 3});
  GSylvProblem<double> p = shifted_kron_problem<double>({id}, id, -1.0, b);
  REQUIRE(p.order() == 2);
  SolveReport<double> rep = solve_gsylv(p);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i)
      CHECK(rep.solution(i, j) == Catch::Approx(b(i, j) / 2.0));
}

TEST_CASE("shifted Kronecker systems match the assembled solve") {
  RandomStream rng(2111);
  auto shifted = [&](int n) {
    Matrix<double> a = randn_matrix<double>(rng, n, n);
    for (int i = 0; i < n; ++i) a(i, i) += 1.0 + 2.0 * std::sqrt(double(n));
    return a;
  };
  Matrix<double> c = shifted(4);
  std::vector<Matrix<double>> factors{shifted(3), shifted(5)};
  Tensor<double> b = randn_tensor<double>(rng, {4, 3, 5});
  GSylvProblem<double> p = shifted_kron_problem(factors, c, 0.75, b);
  Tensor<double> want = oracle::solve(p);
  SolveReport<double> rep = solve_gsylv(p);
  CHECK(rel_diff(rep.solution, want) < 1e-9);
  CHECK(rep.residual < 1e-12);

  SECTION("a zero shift leaves the pure Kronecker-product system") {
    GSylvProblem<double> p0 = shifted_kron_problem(factors, c, 0.0, b);
    SolveReport<double> rep0 = solve_gsylv(p0);
    CHECK(rel_diff(rep0.solution, oracle::solve(p0)) < 1e-9);
  }
}
