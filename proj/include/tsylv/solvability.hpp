#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "tsylv/errors.hpp"
#include "tsylv/kernels.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/scalar.hpp"

namespace tsylv {

// Result of a solvability scan: the operator eigenvalue combination of
// smallest magnitude and where it came from.
struct Solvability {
  bool solvable = true;
  double min_abs = 0; // smallest |operator eigenvalue| encountered
  // One entry per factor: eigenvalue slot (diagonal position) per mode.
  std::vector<int> witness;
  // The participating eigenvalues / diagonal entries.
  std::vector<std::complex<double>> witness_values;
};

namespace detail {

// Smallest |sum| over all tuples drawing one eigenvalue from each list
// (spectrum of a Kronecker sum).  Lists are indexed by diagonal position.
inline Solvability min_kron_sum(
    const std::vector<std::vector<std::complex<double>>>& eigs) {
  using C = std::complex<double>;
  Solvability out;
  out.min_abs = std::numeric_limits<double>::infinity();
  const int d = static_cast<int>(eigs.size());
  std::vector<int> idx(d, 0);
  for (;;) {
    C sum = 0;
    for (int m = 0; m < d; ++m) sum += eigs[m][idx[m]];
    const double a = std::abs(sum);
    if (a < out.min_abs) {
      out.min_abs = a;
      out.witness = idx;
      out.witness_values.clear();
      for (int m = 0; m < d; ++m)
        out.witness_values.push_back(eigs[m][idx[m]]);
    }
    int m = 0;
    while (m < d && ++idx[m] == static_cast<int>(eigs[m].size())) {
      idx[m] = 0;
      ++m;
    }
    if (m == d) break;
  }
  return out;
}

// Smallest eigenvalue magnitude of A1_blk + z * C_blk over all diagonal
// blocks of quasi-triangular A1 (C upper triangular, so C_blk inherits A1's
// block partition) and all products z of one eigenvalue from each list.
// This is exactly the spectrum of kron-structured operators of the form
// (tail products) (x) C + I (x) A1, with the tail spectra supplied in
// `eigs`; callers conjugate the lists when their operator uses adjoints.
template <typename T>
Solvability min_pencil_product(
    const Matrix<T>& a1, const Matrix<T>& c,
    const std::vector<std::vector<std::complex<double>>>& eigs) {
  using C = std::complex<double>;
  const std::vector<int> blocks = quasi_block_sizes(a1);
  std::vector<int> starts;
  int pos = 0;
  for (int sz : blocks) {
    starts.push_back(pos);
    pos += sz;
  }
  const int d = static_cast<int>(eigs.size());
  Solvability out;
  out.min_abs = std::numeric_limits<double>::infinity();
  std::vector<int> idx(d, 0);
  for (;;) {
    C z = 1;
    for (int m = 0; m < d; ++m) z *= eigs[m][idx[m]];
    for (std::size_t bidx = 0; bidx < blocks.size(); ++bidx) {
      const int s = starts[bidx];
      double mag;
      if (blocks[bidx] == 1) {
        mag = std::abs(C(a1(s, s)) + z * C(c(s, s)));
      } else {
        // Exact eigenvalues of the complex 2x2 block A1_blk + z*C_blk.
        const C m00 = C(a1(s, s)) + z * C(c(s, s));
        const C m01 = C(a1(s, s + 1)) + z * C(c(s, s + 1));
        const C m10 = C(a1(s + 1, s));
        const C m11 = C(a1(s + 1, s + 1)) + z * C(c(s + 1, s + 1));
        const C tr = m00 + m11;
        const C disc = std::sqrt(tr * tr / 4.0 - (m00 * m11 - m01 * m10));
        mag = std::min(std::abs(tr / 2.0 + disc), std::abs(tr / 2.0 - disc));
      }
      if (mag < out.min_abs) {
        out.min_abs = mag;
        out.witness.assign(1, s);
        out.witness.insert(out.witness.end(), idx.begin(), idx.end());
        out.witness_values.assign({C(a1(s, s)), C(c(s, s))});
        for (int m = 0; m < d; ++m)
          out.witness_values.push_back(eigs[m][idx[m]]);
      }
    }
    int m = 0;
    while (m < d && ++idx[m] == static_cast<int>(eigs[m].size())) {
      idx[m] = 0;
      ++m;
    }
    if (m == d) break;
  }
  return out;
}

inline std::string witness_message(const char* who, const Solvability& s) {
  std::string msg = std::string(who) + ": operator numerically singular "
                                       "(|eigenvalue| = " +
                    std::to_string(s.min_abs) + " at slots (";
  for (std::size_t i = 0; i < s.witness.size(); ++i)
    msg += (i ? "," : "") + std::to_string(s.witness[i]);
  msg += "))";
  return msg;
}

} // namespace detail
} // namespace tsylv
