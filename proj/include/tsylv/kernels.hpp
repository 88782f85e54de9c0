#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsylv/errors.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/scalar.hpp"

// Reference LAPACK, Fortran calling convention (non-symmetric eigensolvers).
extern "C" {
void dgees_(const char* jobvs, const char* sort, void* select, const int* n,
            double* a, const int* lda, int* sdim, double* wr, double* wi,
            double* vs, const int* ldvs, double* work, const int* lwork,
            int* bwork, int* info);
void zgees_(const char* jobvs, const char* sort, void* select, const int* n,
            std::complex<double>* a, const int* lda, int* sdim,
            std::complex<double>* w, std::complex<double>* vs, const int* ldvs,
            std::complex<double>* work, const int* lwork, double* rwork,
            int* bwork, int* info);
void dgges_(const char* jobvsl, const char* jobvsr, const char* sort,
            void* selctg, const int* n, double* a, const int* lda, double* b,
            const int* ldb, int* sdim, double* alphar, double* alphai,
            double* beta, double* vsl, const int* ldvsl, double* vsr,
            const int* ldvsr, double* work, const int* lwork, int* bwork,
            int* info);
void zgges_(const char* jobvsl, const char* jobvsr, const char* sort,
            void* selctg, const int* n, std::complex<double>* a,
            const int* lda, std::complex<double>* b, const int* ldb, int* sdim,
            std::complex<double>* alpha, std::complex<double>* beta,
            std::complex<double>* vsl, const int* ldvsl,
            std::complex<double>* vsr, const int* ldvsr,
            std::complex<double>* work, const int* lwork, double* rwork,
            int* bwork, int* info);
}

namespace tsylv {

// A = U T U^H with U unitary; T is upper triangular for complex input and
// upper quasi-triangular (1x1/2x2 diagonal blocks) for real input.
template <typename T>
struct SchurFactorization {
  Matrix<T> u;
  Matrix<T> t;
};

// A = U S Z^H, C = U T Z^H with U, Z unitary; S is (quasi-)triangular and T
// upper triangular.
template <typename T>
struct GeneralizedSchurFactorization {
  Matrix<T> u;
  Matrix<T> z;
  Matrix<T> s;
  Matrix<T> t;
};

namespace detail {
inline void require_square(int rows, int cols, const char* who) {
  if (rows != cols || rows == 0)
    throw dimension_error(std::string(who) + ": matrix must be square and non-empty");
}
[[noreturn]] inline void lapack_failed(const char* routine, int info) {
  if (info < 0)
    throw std::invalid_argument(std::string(routine) + ": illegal argument " +
                                std::to_string(-info));
  throw factorization_error(std::string(routine) +
                                ": QR/QZ iteration failed to converge (info=" +
                                std::to_string(info) + ")",
                            info);
}
} // namespace detail

inline SchurFactorization<double> schur(Matrix<double> a) {
  detail::require_square(a.rows(), a.cols(), "schur");
  const int n = a.rows();
  Matrix<double> vs(n, n);
  std::vector<double> wr(n), wi(n);
  int sdim = 0, info = 0, lwork = -1;
  double wkopt = 0;
  dgees_("V", "N", nullptr, &n, a.data(), &n, &sdim, wr.data(), wi.data(),
         vs.data(), &n, &wkopt, &lwork, nullptr, &info);
  lwork = static_cast<int>(wkopt);
  std::vector<double> work(std::max(1, lwork));
  dgees_("V", "N", nullptr, &n, a.data(), &n, &sdim, wr.data(), wi.data(),
         vs.data(), &n, work.data(), &lwork, nullptr, &info);
  if (info != 0) detail::lapack_failed("dgees", info);
  return {std::move(vs), std::move(a)};
}

inline SchurFactorization<Complex> schur(Matrix<Complex> a) {
  detail::require_square(a.rows(), a.cols(), "schur");
  const int n = a.rows();
  Matrix<Complex> vs(n, n);
  std::vector<Complex> w(n);
  std::vector<double> rwork(n);
  int sdim = 0, info = 0, lwork = -1;
  Complex wkopt;
  zgees_("V", "N", nullptr, &n, a.data(), &n, &sdim, w.data(), vs.data(), &n,
         &wkopt, &lwork, rwork.data(), nullptr, &info);
  lwork = static_cast<int>(wkopt.real());
  std::vector<Complex> work(std::max(1, lwork));
  zgees_("V", "N", nullptr, &n, a.data(), &n, &sdim, w.data(), vs.data(), &n,
         work.data(), &lwork, rwork.data(), nullptr, &info);
  if (info != 0) detail::lapack_failed("zgees", info);
  return {std::move(vs), std::move(a)};
}

inline GeneralizedSchurFactorization<double> qz(Matrix<double> a,
                                                Matrix<double> c) {
  detail::require_square(a.rows(), a.cols(), "qz");
  if (c.rows() != a.rows() || c.cols() != a.cols())
    throw dimension_error("qz: pencil matrices must have equal shape");
  const int n = a.rows();
  Matrix<double> vsl(n, n), vsr(n, n);
  std::vector<double> ar(n), ai(n), be(n);
  int sdim = 0, info = 0, lwork = -1;
  double wkopt = 0;
  dgges_("V", "V", "N", nullptr, &n, a.data(), &n, c.data(), &n, &sdim,
         ar.data(), ai.data(), be.data(), vsl.data(), &n, vsr.data(), &n,
         &wkopt, &lwork, nullptr, &info);
  lwork = static_cast<int>(wkopt);
  std::vector<double> work(std::max(1, lwork));
  dgges_("V", "V", "N", nullptr, &n, a.data(), &n, c.data(), &n, &sdim,
         ar.data(), ai.data(), be.data(), vsl.data(), &n, vsr.data(), &n,
         work.data(), &lwork, nullptr, &info);
  if (info != 0) detail::lapack_failed("dgges", info);
  return {std::move(vsl), std::move(vsr), std::move(a), std::move(c)};
}

inline GeneralizedSchurFactorization<Complex> qz(Matrix<Complex> a,
                                                 Matrix<Complex> c) {
  detail::require_square(a.rows(), a.cols(), "qz");
  if (c.rows() != a.rows() || c.cols() != a.cols())
    throw dimension_error("qz: pencil matrices must have equal shape");
  const int n = a.rows();
  Matrix<Complex> vsl(n, n), vsr(n, n);
  std::vector<Complex> alpha(n), beta(n);
  std::vector<double> rwork(8 * n);
  int sdim = 0, info = 0, lwork = -1;
  Complex wkopt;
  zgges_("V", "V", "N", nullptr, &n, a.data(), &n, c.data(), &n, &sdim,
         alpha.data(), beta.data(), vsl.data(), &n, vsr.data(), &n, &wkopt,
         &lwork, rwork.data(), nullptr, &info);
  lwork = static_cast<int>(wkopt.real());
  std::vector<Complex> work(std::max(1, lwork));
  zgges_("V", "V", "N", nullptr, &n, a.data(), &n, c.data(), &n, &sdim,
         alpha.data(), beta.data(), vsl.data(), &n, vsr.data(), &n,
         work.data(), &lwork, rwork.data(), nullptr, &info);
  if (info != 0) detail::lapack_failed("zgges", info);
  return {std::move(vsl), std::move(vsr), std::move(a), std::move(c)};
}

// Kronecker product, column-major: (A (x) B)(i*p + k, j*q + l) = A(i,j)B(k,l)
// with B of shape p x q.
template <typename T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
  const int p = b.rows(), q = b.cols();
  Matrix<T> out(a.rows() * p, a.cols() * q);
  for (int j = 0; j < a.cols(); ++j)
    for (int l = 0; l < q; ++l) {
      T* dst = out.col(j * q + l);
      for (int i = 0; i < a.rows(); ++i) {
        const T aij = a(i, j);
        const T* bc = b.col(l);
        T* d = dst + static_cast<std::size_t>(i) * p;
        for (int k = 0; k < p; ++k) d[k] = aij * bc[k];
      }
    }
  return out;
}

// Solves T x = b for upper-triangular T by back-substitution; throws
// singular_error on an (effectively) zero pivot, reporting its position.
template <typename T>
std::vector<T> block_back_substitution(const Matrix<T>& t, std::vector<T> b) {
  detail::require_square(t.rows(), t.cols(), "block_back_substitution");
  const int n = t.rows();
  if (static_cast<int>(b.size()) != n)
    throw dimension_error("block_back_substitution: rhs length mismatch");
  const double tiny = unit_roundoff<double> * t.frobenius_norm();
  for (int j = n - 1; j >= 0; --j) {
    const T d = t(j, j);
    if (std::abs(d) <= tiny)
      throw singular_error(
          "block_back_substitution: zero pivot at diagonal index " +
              std::to_string(j),
          {j}, {std::complex<double>(d)}, std::abs(d));
    b[j] /= d;
    const T xj = b[j];
    const T* colj = t.col(j);
    for (int i = 0; i < j; ++i) b[i] -= colj[i] * xj;
  }
  return b;
}

// Block variant: T is block upper triangular with the given contiguous
// diagonal block sizes; each diagonal block is solved densely (LU with
// partial pivoting), then the columns above are updated.
template <typename T>
std::vector<T> block_back_substitution(const Matrix<T>& t, std::vector<T> b,
                                       std::span<const int> block_sizes) {
  detail::require_square(t.rows(), t.cols(), "block_back_substitution");
  const int n = t.rows();
  if (static_cast<int>(b.size()) != n)
    throw dimension_error("block_back_substitution: rhs length mismatch");
  int total = 0;
  for (int s : block_sizes) {
    if (s <= 0) throw dimension_error("block_back_substitution: bad block size");
    total += s;
  }
  if (total != n)
    throw dimension_error("block_back_substitution: block sizes do not sum to n");

  const double tiny = unit_roundoff<double> * t.frobenius_norm();
  int e = n;
  for (auto it = block_sizes.rbegin(); it != block_sizes.rend(); ++it) {
    const int sz = *it, s = e - sz;
    // Factor and solve the diagonal block in a scratch copy.
    Matrix<T> blk = t.block(s, e, s, e);
    std::vector<T> x(b.begin() + s, b.begin() + e);
    for (int k = 0; k < sz; ++k) {
      int piv = k;
      double best = std::abs(blk(k, k));
      for (int i = k + 1; i < sz; ++i)
        if (std::abs(blk(i, k)) > best) best = std::abs(blk(i, k)), piv = i;
      if (best <= tiny)
        throw singular_error(
            "block_back_substitution: singular diagonal block at rows [" +
                std::to_string(s) + "," + std::to_string(e) + ")",
            {s + k}, {std::complex<double>(blk(piv, k))}, best);
      if (piv != k) {
        for (int j = 0; j < sz; ++j) std::swap(blk(k, j), blk(piv, j));
        std::swap(x[k], x[piv]);
      }
      for (int i = k + 1; i < sz; ++i) {
        const T m = blk(i, k) / blk(k, k);
        blk(i, k) = m;
        for (int j = k + 1; j < sz; ++j) blk(i, j) -= m * blk(k, j);
        x[i] -= m * x[k];
      }
    }
    for (int k = sz - 1; k >= 0; --k) {
      for (int j = k + 1; j < sz; ++j) x[k] -= blk(k, j) * x[j];
      x[k] /= blk(k, k);
    }
    std::copy(x.begin(), x.end(), b.begin() + s);
    // b(0:s) -= T(0:s, s:e) * x.
    for (int j = s; j < e; ++j) {
      const T xj = b[j];
      const T* colj = t.col(j);
      for (int i = 0; i < s; ++i) b[i] -= colj[i] * xj;
    }
    e = s;
  }
  return b;
}

// Finest contiguous partition (block sizes, top-left to bottom-right) such
// that T is block upper triangular with respect to it.  For an upper
// triangular matrix this is all ones.
template <typename T>
std::vector<int> lower_block_partition(const Matrix<T>& t) {
  detail::require_square(t.rows(), t.cols(), "lower_block_partition");
  const int n = t.rows();
  std::vector<int> sizes;
  int reach = 0, start = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = n - 1; i > j; --i)
      if (t(i, j) != T{}) {
        reach = std::max(reach, i);
        break;
      }
    if (reach <= j) {
      sizes.push_back(j + 1 - start);
      start = j + 1;
    }
  }
  return sizes;
}

// Diagonal block sizes (1 or 2) of an upper quasi-triangular matrix; throws
// if the matrix is not quasi-triangular.
template <typename T>
std::vector<int> quasi_block_sizes(const Matrix<T>& t) {
  if (t.rows() != t.cols() || !is_upper_quasi_triangular(t))
    throw dimension_error("quasi_block_sizes: matrix is not upper quasi-triangular");
  const int n = t.rows();
  std::vector<int> sizes;
  for (int j = 0; j < n;) {
    if (j + 1 < n && t(j + 1, j) != T{}) {
      sizes.push_back(2);
      j += 2;
    } else {
      sizes.push_back(1);
      j += 1;
    }
  }
  return sizes;
}

// Eigenvalues of a (quasi-)triangular matrix, in diagonal order: 1x1 blocks
// contribute their entry, 2x2 blocks the roots of their characteristic
// quadratic (a conjugate pair for real Schur blocks).
template <typename T>
std::vector<std::complex<double>> quasi_tri_eigenvalues(const Matrix<T>& t) {
  using C = std::complex<double>;
  const std::vector<int> blocks = quasi_block_sizes(t);
  std::vector<C> eig;
  eig.reserve(t.rows());
  int j = 0;
  for (int sz : blocks) {
    if (sz == 1) {
      eig.emplace_back(t(j, j));
    } else {
      const C tr = C(t(j, j)) + C(t(j + 1, j + 1));
      const C det = C(t(j, j)) * C(t(j + 1, j + 1)) -
                    C(t(j, j + 1)) * C(t(j + 1, j));
      const C disc = std::sqrt(tr * tr / 4.0 - det);
      eig.push_back(tr / 2.0 + disc);
      eig.push_back(tr / 2.0 - disc);
    }
    j += sz;
  }
  return eig;
}

// Perfect shuffle permutation of length p*q, as an index map: entry r of the
// shuffled vector is entry perm[r] of the original, with perm[k*p + i] =
// i*q + k.  Simultaneously maps A (x) B to B (x) A for A of order p and B of
// order q: (P^T M P)(r, c) = M(perm[r], perm[c]).
inline std::vector<int> perfect_shuffle(int p, int q) {
  if (p <= 0 || q <= 0)
    throw dimension_error("perfect_shuffle: orders must be positive");
  std::vector<int> perm(static_cast<std::size_t>(p) * q);
  for (int k = 0; k < q; ++k)
    for (int i = 0; i < p; ++i)
      perm[static_cast<std::size_t>(k) * p + i] = i * q + k;
  return perm;
}

// P^T M P for the permutation given as an index map (see perfect_shuffle).
template <typename T>
Matrix<T> permutation_congruence(const Matrix<T>& m,
                                 std::span<const int> perm) {
  detail::require_square(m.rows(), m.cols(), "permutation_congruence");
  if (static_cast<int>(perm.size()) != m.rows())
    throw dimension_error("permutation_congruence: permutation length mismatch");
  Matrix<T> out(m.rows(), m.cols());
  for (int c = 0; c < m.cols(); ++c)
    for (int r = 0; r < m.rows(); ++r) out(r, c) = m(perm[r], perm[c]);
  return out;
}

// The two merged-coefficient shapes whose block structure the shuffle
// analysis describes: the Kronecker-sum merge I (x) A1 + A2 (x) I and the
// product merge A2 (x) A1.
enum class MergedForm { kron_sum, kron_product };

struct ShuffleBlockStructure {
  // Index map to apply as P^T M P (see permutation_congruence).
  std::vector<int> permutation;
  // Diagonal block sizes of the permuted matrix (each at most 4 when both
  // inputs are quasi-triangular with 1x1/2x2 blocks).
  std::vector<int> block_sizes;
};

// For quasi-triangular A1 (inner factor, order n1) and A2 (outer factor,
// order n2), computes the symmetric permutation that makes the merged
// coefficient block upper triangular with diagonal blocks of size <= 4, plus
// those block sizes.  Rows belonging to a 1x1 block of A2 keep their order
// (the merged diagonal chunk is A1 + a*I resp. a*A1, already quasi-
// triangular); rows of a 2x2 block of A2 are perfectly shuffled so the chunk
// becomes A1 (x) I2 + I (x) A2_blk resp. A1 (x) A2_blk, which doubles A1's
// block sizes.
template <typename T>
ShuffleBlockStructure shuffle_block_structure(const Matrix<T>& a1,
                                              const Matrix<T>& a2,
                                              MergedForm form) {
  (void)form; // same permutation and sizes for both merged shapes
  const std::vector<int> inner = quasi_block_sizes(a1);
  const std::vector<int> outer = quasi_block_sizes(a2);
  const int n1 = a1.rows();
  ShuffleBlockStructure out;
  out.permutation.reserve(static_cast<std::size_t>(n1) * a2.rows());
  int pos = 0;
  for (int sz : outer) {
    if (sz == 1) {
      for (int i = 0; i < n1; ++i) out.permutation.push_back(pos + i);
      out.block_sizes.insert(out.block_sizes.end(), inner.begin(),
                             inner.end());
      pos += n1;
    } else {
      const std::vector<int> local = perfect_shuffle(2, n1);
      for (int i = 0; i < 2 * n1; ++i)
        out.permutation.push_back(pos + local[i]);
      for (int b : inner) out.block_sizes.push_back(2 * b);
      pos += 2 * n1;
    }
  }
  return out;
}

} // namespace tsylv
