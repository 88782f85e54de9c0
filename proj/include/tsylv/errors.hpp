#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tsylv {

// Shape or argument contract violation (caller bug): mismatched dimensions,
// mode out of range, coefficient not (quasi-)triangular where required, ...
class dimension_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Problem/solution file could not be read, parsed, or written.
class io_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An iterative eigenvalue reduction (QR/QZ sweep) did not converge.
class factorization_error : public std::runtime_error {
public:
  explicit factorization_error(const std::string& msg, int info = 0)
      : std::runtime_error(msg), info_(info) {}
  // Raw LAPACK-style info code when the failure came from a factorization.
  int info() const noexcept { return info_; }

private:
  int info_ = 0;
};

// The linear operator is numerically singular.  Carries the witness that
// triggered rejection: which diagonal/eigenvalue slots combine to (almost)
// zero, the values involved, and the offending magnitude.
class singular_error : public std::runtime_error {
public:
  explicit singular_error(const std::string& msg,
                          std::vector<int> indices = {},
                          std::vector<std::complex<double>> values = {},
                          double min_abs = 0.0)
      : std::runtime_error(msg), indices_(std::move(indices)),
        values_(std::move(values)), min_abs_(min_abs) {}

  // One index per participating factor (e.g. one diagonal position per mode);
  // for a back-substitution breakdown, the single offending row/column.
  const std::vector<int>& indices() const noexcept { return indices_; }
  // The eigenvalues / diagonal entries whose combination vanished.
  const std::vector<std::complex<double>>& values() const noexcept {
    return values_;
  }
  // |combination| that fell below the singularity tolerance.
  double min_abs() const noexcept { return min_abs_; }

private:
  std::vector<int> indices_;
  std::vector<std::complex<double>> values_;
  double min_abs_ = 0.0;
};

} // namespace tsylv
