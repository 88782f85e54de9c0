#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "tsylv/matrix.hpp"
#include "tsylv/problems.hpp"
#include "tsylv/scalar.hpp"
#include "tsylv/tensor.hpp"

namespace tsylv {

// Deterministic Gaussian stream: mt19937_64 plus a fixed Box-Muller
// transform.  std::normal_distribution is implementation-defined, which
// would break the "same seed => bit-identical files" guarantee; this is not.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [lo, hi] (inclusive).
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(eng_() % span);
  }

  // Standard normal via Box-Muller; the pair member is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

  // Standard normal scalar of the requested type; complex draws have unit
  // total variance.
  template <typename T>
  T draw() {
    if constexpr (is_complex_v<T>)
      return T(normal() * std::numbers::sqrt2 / 2.0,
               normal() * std::numbers::sqrt2 / 2.0);
    else
      return static_cast<T>(normal());
  }

private:
  std::mt19937_64 eng_;
  double spare_ = 0;
  bool have_spare_ = false;
};

template <typename T>
Matrix<T> randn_matrix(RandomStream& rng, int rows, int cols) {
  Matrix<T> m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.draw<T>();
  return m;
}

template <typename T>
Tensor<T> randn_tensor(RandomStream& rng, const std::vector<int>& dims) {
  Tensor<T> t(dims);
  for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = rng.draw<T>();
  return t;
}

// Upper triangular with Gaussian entries; diagonal real parts are shifted by
// +diag_shift (eigenvalues of a triangular matrix are its diagonal).
template <typename T>
Matrix<T> randn_triangular(RandomStream& rng, int n, double diag_shift = 0) {
  Matrix<T> m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) m(i, j) = rng.draw<T>();
  for (int i = 0; i < n; ++i) m(i, i) += T(diag_shift);
  return m;
}

// Upper triangular whose diagonal entries have real part >= floor (|N(0,1)|
// + floor), so spectra stay in the open right half plane by construction.
template <typename T>
Matrix<T> randn_triangular_posdiag(RandomStream& rng, int n,
                                   double floor_re = 1.0) {
  Matrix<T> m = randn_triangular<T>(rng, n, 0);
  for (int i = 0; i < n; ++i) {
    const double re = std::abs(rng.normal()) + floor_re;
    if constexpr (is_complex_v<T>)
      m(i, i) = T(re, 0.4 * rng.normal());
    else
      m(i, i) = T(re);
  }
  return m;
}

// Upper triangular with diagonal magnitudes confined to [lo, hi]; used for
// product-structured coefficients where the spectral product must stay small.
template <typename T>
Matrix<T> randn_triangular_ringdiag(RandomStream& rng, int n, double lo,
                                    double hi) {
  Matrix<T> m = randn_triangular<T>(rng, n, 0);
  for (int i = 0; i < n; ++i) {
    const double r = lo + (hi - lo) * rng.uniform();
    if constexpr (is_complex_v<T>) {
      const double th = 2.0 * std::numbers::pi * rng.uniform();
      m(i, i) = T(r * std::cos(th), r * std::sin(th));
    } else {
      m(i, i) = T(rng.uniform() < 0.5 ? -r : r);
    }
  }
  return m;
}

// Real upper quasi-triangular with random 1x1/2x2 diagonal blocks; 2x2
// blocks are built to have complex eigenvalues a +- i*sqrt(b*c).  Diagonal
// real parts sit at +diag_shift.
inline Matrix<double> randn_quasi_triangular(RandomStream& rng, int n,
                                             double diag_shift = 0,
                                             double pair_prob = 0.5) {
  Matrix<double> m(n, n);
  std::vector<int> starts;
  for (int j = 0; j < n;) {
    if (j + 1 < n && rng.uniform() < pair_prob) {
      const double a = std::abs(rng.normal()) + diag_shift;
      const double b = std::abs(rng.normal()) + 0.25;
      const double c = std::abs(rng.normal()) + 0.25;
      m(j, j) = a;
      m(j + 1, j + 1) = a;
      m(j, j + 1) = b;
      m(j + 1, j) = -c;
      j += 2;
    } else {
      m(j, j) = std::abs(rng.normal()) + diag_shift;
      j += 1;
    }
  }
  // Strictly upper entries outside the diagonal blocks.
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if (m(i, j) == 0.0 && m(j, i) == 0.0) m(i, j) = rng.normal();
  return m;
}

// Dense well-posed instances: Gaussian coefficients with spectra pushed into
// the right half plane by a diagonal shift of 1 + 2*sqrt(n_m) (the Gaussian
// spectral radius is ~sqrt(n_m)), so eigenvalue sums stay away from zero.
template <typename T>
LaplaceProblem<T> random_laplace_problem(RandomStream& rng,
                                         const std::vector<int>& dims) {
  LaplaceProblem<T> p;
  for (int n : dims) {
    Matrix<T> a = randn_matrix<T>(rng, n, n);
    const double shift = 1.0 + 2.0 * std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) a(i, i) += T(shift);
    p.coeffs.push_back(std::move(a));
  }
  p.rhs = randn_tensor<T>(rng, dims);
  return p;
}

// Dense well-posed generalized instances: A_0 shifted right-half-plane, C
// and the product factors scaled so |c * prod(lambda_m)| < 1 <= Re(lambda_0).
template <typename T>
GSylvProblem<T> random_gsylv_problem(RandomStream& rng,
                                     const std::vector<int>& dims) {
  GSylvProblem<T> p;
  const int n0 = dims[0];
  {
    Matrix<T> a = randn_matrix<T>(rng, n0, n0);
    const double shift = 1.0 + 2.0 * std::sqrt(static_cast<double>(n0));
    for (int i = 0; i < n0; ++i) a(i, i) += T(shift);
    p.coeffs.push_back(std::move(a));
  }
  p.c = randn_matrix<T>(rng, n0, n0);
  p.c *= T(0.25 / std::sqrt(static_cast<double>(n0)));
  for (std::size_t m = 1; m < dims.size(); ++m) {
    const int n = dims[m];
    Matrix<T> a = randn_matrix<T>(rng, n, n);
    a *= T(0.45 / std::sqrt(static_cast<double>(n)));
    p.coeffs.push_back(std::move(a));
  }
  p.rhs = randn_tensor<T>(rng, dims);
  return p;
}

// Reduced-form (triangular) instances, solvable by construction: Laplace
// diagonals have real part >= 1, so every eigenvalue sum has real part >= d.
template <typename T>
LaplaceProblem<T> random_reduced_laplace(RandomStream& rng,
                                         const std::vector<int>& dims) {
  LaplaceProblem<T> p;
  for (int n : dims)
    p.coeffs.push_back(randn_triangular_posdiag<T>(rng, n, 1.0));
  p.rhs = randn_tensor<T>(rng, dims);
  return p;
}

// Triangular generalized instances: Re(a0_ii) >= 1, |c_ii| <= 0.3 and
// |prod of later diagonals| <= 0.9, so |a0_ii + c_ii * prod| >= 0.7.
template <typename T>
GSylvProblem<T> random_reduced_gsylv(RandomStream& rng,
                                     const std::vector<int>& dims) {
  GSylvProblem<T> p;
  const int n0 = dims[0];
  p.coeffs.push_back(randn_triangular_posdiag<T>(rng, n0, 1.0));
  p.c = randn_triangular_ringdiag<T>(rng, n0, 0.05, 0.3);
  p.c *= T(0.3);
  for (std::size_t m = 1; m < dims.size(); ++m)
    p.coeffs.push_back(
        randn_triangular_ringdiag<T>(rng, dims[m], 0.3, 0.95));
  p.rhs = randn_tensor<T>(rng, dims);
  return p;
}

} // namespace tsylv
