#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstring>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "tsylv/blas.hpp"
#include "tsylv/errors.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/scalar.hpp"

namespace tsylv {

// Dense order-d tensor in "column-major" layout: the linear offset of the
// multi-index (i_0, ..., i_{d-1}) is
//
//   i_0 + i_1*n_0 + i_2*n_0*n_1 + ... ,
//
// i.e. mode 0 is fastest.  All modes are 0-based.  A consequence worth
// exploiting everywhere: fusing two *adjacent* modes (m, m+1) into one of
// size n_m*n_{m+1} never moves data, and for d = 2 the buffer coincides with
// a column-major matrix.
template <typename T>
class Tensor {
public:
  Tensor() = default;

  explicit Tensor(std::vector<int> dims) : dims_(std::move(dims)) {
    data_.assign(checked_size(dims_), T{});
  }
  Tensor(std::vector<int> dims, std::vector<T> data)
      : dims_(std::move(dims)), data_(std::move(data)) {
    if (data_.size() != checked_size(dims_))
      throw dimension_error("Tensor: data size does not match dims");
  }

  int order() const noexcept { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const noexcept { return dims_; }
  int dim(int mode) const {
    check_mode(mode);
    return dims_[mode];
  }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }
  const std::vector<T>& values() const noexcept { return data_; }
  std::vector<T> take_values() && { return std::move(data_); }

  // Stride of one step along `mode` (product of the dimensions before it).
  std::size_t stride(int mode) const {
    check_mode(mode);
    std::size_t s = 1;
    for (int v = 0; v < mode; ++v) s *= static_cast<std::size_t>(dims_[v]);
    return s;
  }

  std::size_t offset_of(const std::vector<int>& index) const {
    if (static_cast<int>(index.size()) != order())
      throw dimension_error("Tensor: index order mismatch");
    std::size_t off = 0, s = 1;
    for (int v = 0; v < order(); ++v) {
      if (index[v] < 0 || index[v] >= dims_[v])
        throw dimension_error("Tensor: index out of range");
      off += s * static_cast<std::size_t>(index[v]);
      s *= static_cast<std::size_t>(dims_[v]);
    }
    return off;
  }

  T& at(const std::vector<int>& index) { return data_[offset_of(index)]; }
  const T& at(const std::vector<int>& index) const {
    return data_[offset_of(index)];
  }

  template <typename... I>
  T& operator()(I... idx) { return at({static_cast<int>(idx)...}); }
  template <typename... I>
  const T& operator()(I... idx) const { return at({static_cast<int>(idx)...}); }

  double frobenius_norm() const {
    double s = 0;
    for (const T& v : data_) s += static_cast<double>(abs_squared(v));
    return std::sqrt(s);
  }

  Tensor& operator-=(const Tensor& rhs) {
    if (dims_ != rhs.dims_)
      throw dimension_error("Tensor: shape mismatch in -=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
  }
  Tensor& operator+=(const Tensor& rhs) {
    if (dims_ != rhs.dims_)
      throw dimension_error("Tensor: shape mismatch in +=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
  }

private:
  static std::size_t checked_size(const std::vector<int>& dims) {
    std::size_t n = 1;
    for (int d : dims) {
      if (d <= 0) throw dimension_error("Tensor: dimensions must be positive");
      n *= static_cast<std::size_t>(d);
    }
    return dims.empty() ? 0 : n;
  }
  void check_mode(int mode) const {
    if (mode < 0 || mode >= order())
      throw dimension_error("Tensor: mode out of range");
  }

  std::vector<int> dims_;
  std::vector<T> data_;
};

// Half-open index window along one mode.
struct ModeSlice {
  int mode = 0;
  int begin = 0;
  int end = 0;
};

namespace detail {
// Sizes of the index blocks before/at/after `mode`: N = p * n_mode * q.
template <typename T>
void mode_extents(const Tensor<T>& x, int mode, std::size_t& p, int& n,
                  std::size_t& q) {
  n = x.dim(mode); // validates mode
  p = 1;
  q = 1;
  for (int v = 0; v < mode; ++v) p *= static_cast<std::size_t>(x.dim(v));
  for (int v = mode + 1; v < x.order(); ++v)
    q *= static_cast<std::size_t>(x.dim(v));
}
} // namespace detail

// Mode-m unfolding: an n_m x (N/n_m) matrix whose (i, j) entry is the tensor
// entry with i_m = i and the remaining indices enumerated in layout order
// (lowest surviving mode fastest).
template <typename T>
Matrix<T> matricize(const Tensor<T>& x, int mode) {
  std::size_t p, q;
  int n;
  detail::mode_extents(x, mode, p, n, q);
  Matrix<T> out(n, static_cast<int>(p * q));
  const T* src = x.data();
  for (std::size_t o = 0; o < q; ++o)
    for (int i = 0; i < n; ++i) {
      const T* s = src + o * p * n + static_cast<std::size_t>(i) * p;
      T* dst = out.data() + o * p * n + static_cast<std::size_t>(i);
      for (std::size_t in = 0; in < p; ++in) dst[in * static_cast<std::size_t>(n)] = s[in];
    }
  return out;
}

// Inverse of matricize: fold an n_m x (N/n_m) matrix back into shape `dims`.
template <typename T>
Tensor<T> tensorize(const Matrix<T>& m, const std::vector<int>& dims,
                    int mode) {
  Tensor<T> out(dims);
  std::size_t p, q;
  int n;
  detail::mode_extents(out, mode, p, n, q);
  if (m.rows() != n || static_cast<std::size_t>(m.cols()) != p * q)
    throw dimension_error("tensorize: matrix shape does not match dims/mode");
  T* dst = out.data();
  for (std::size_t o = 0; o < q; ++o)
    for (int i = 0; i < n; ++i) {
      const T* s = m.data() + o * p * n + static_cast<std::size_t>(i);
      T* d = dst + o * p * n + static_cast<std::size_t>(i) * p;
      for (std::size_t in = 0; in < p; ++in) d[in] = s[in * static_cast<std::size_t>(n)];
    }
  return out;
}

// Y = X x_m A: contracts mode m with the columns of A (A is r x n_m, the
// result has n_m replaced by r).  Equivalent to folding A * matricize(X, m),
// but computed as GEMMs on the contiguous slabs, without the two copies.
template <typename T>
Tensor<T> mode_multiply(const Tensor<T>& x, const Matrix<T>& a, int mode) {
  std::size_t p, q;
  int n;
  detail::mode_extents(x, mode, p, n, q);
  if (a.cols() != n)
    throw dimension_error("mode_multiply: A has " + std::to_string(a.cols()) +
                          " columns, mode extent is " + std::to_string(n));
  if (a.rows() <= 0)
    throw dimension_error("mode_multiply: A must have positive row count");
  const int r = a.rows();
  std::vector<int> ydims = x.dims();
  ydims[mode] = r;
  Tensor<T> y(ydims);

  const int lda = std::max(1, r);
  if (mode == 0) {
    // Y_(0) = A * X_(0): one GEMM, split over result columns.
    const int cols_total = static_cast<int>(x.size() / static_cast<std::size_t>(n));
    parallel_chunks(cols_total, [&](int lo, int hi) {
      gemm('N', 'N', r, hi - lo, n, T(1), a.data(), lda,
           x.data() + static_cast<std::size_t>(lo) * n, n, T(0),
           y.data() + static_cast<std::size_t>(lo) * r, r);
    });
  } else if (q == 1) {
    // Last mode: Y = X_slab * A^T, split over the r result columns.
    parallel_chunks(r, [&](int lo, int hi) {
      gemm('N', 'T', static_cast<int>(p), hi - lo, n, T(1), x.data(),
           static_cast<int>(p), a.data() + lo, lda, T(0),
           y.data() + static_cast<std::size_t>(lo) * p, static_cast<int>(p));
    });
  } else {
    // Middle mode: independent (p x n) * A^T GEMM per trailing slab.
    parallel_chunks(static_cast<int>(q), [&](int lo, int hi) {
      for (int o = lo; o < hi; ++o) {
        gemm('N', 'T', static_cast<int>(p), r, n, T(1),
             x.data() + static_cast<std::size_t>(o) * p * n,
             static_cast<int>(p), a.data(), lda, T(0),
             y.data() + static_cast<std::size_t>(o) * p * r,
             static_cast<int>(p));
      }
    });
  }
  return y;
}

// Copy of the window [begin, end) along `mode`.
template <typename T>
Tensor<T> mode_slice(const Tensor<T>& x, const ModeSlice& w) {
  std::size_t p, q;
  int n;
  detail::mode_extents(x, w.mode, p, n, q);
  if (w.begin < 0 || w.end > n || w.begin >= w.end)
    throw dimension_error("mode_slice: empty or out-of-range window");
  const int k = w.end - w.begin;
  std::vector<int> dims = x.dims();
  dims[w.mode] = k;
  Tensor<T> out(dims);
  const std::size_t chunk = p * static_cast<std::size_t>(k);
  for (std::size_t o = 0; o < q; ++o)
    std::copy_n(x.data() + o * p * n + p * static_cast<std::size_t>(w.begin),
                chunk, out.data() + o * chunk);
  return out;
}

// Splits along `mode` into the leading k slices and the rest.
template <typename T>
std::pair<Tensor<T>, Tensor<T>> mode_split(const Tensor<T>& x, int mode,
                                           int k) {
  const int n = x.dim(mode);
  if (k <= 0 || k >= n)
    throw dimension_error("mode_split: split point must be interior");
  return {mode_slice(x, {mode, 0, k}), mode_slice(x, {mode, k, n})};
}

// Inverse of mode_split: stack x1 and x2 along `mode`.
template <typename T>
Tensor<T> mode_concat(const Tensor<T>& x1, const Tensor<T>& x2, int mode) {
  if (x1.order() != x2.order())
    throw dimension_error("mode_concat: order mismatch");
  for (int v = 0; v < x1.order(); ++v)
    if (v != mode && x1.dim(v) != x2.dim(v))
      throw dimension_error("mode_concat: dims differ off the stacked mode");
  std::size_t p, q;
  int n1;
  detail::mode_extents(x1, mode, p, n1, q);
  const int n2 = x2.dim(mode);
  std::vector<int> dims = x1.dims();
  dims[mode] = n1 + n2;
  Tensor<T> out(dims);
  const std::size_t c1 = p * static_cast<std::size_t>(n1);
  const std::size_t c2 = p * static_cast<std::size_t>(n2);
  for (std::size_t o = 0; o < q; ++o) {
    std::copy_n(x1.data() + o * c1, c1, out.data() + o * (c1 + c2));
    std::copy_n(x2.data() + o * c2, c2, out.data() + o * (c1 + c2) + c1);
  }
  return out;
}

// Fuses adjacent modes (m, m+1) into one of extent n_m * n_{m+1}.  With this
// layout that is a pure reshape: the data buffer is reused unchanged.
template <typename T>
Tensor<T> merge_modes(Tensor<T> x, int mode) {
  if (mode < 0 || mode + 1 >= x.order())
    throw dimension_error("merge_modes: needs two adjacent modes");
  std::vector<int> dims = x.dims();
  dims[mode] *= dims[mode + 1];
  dims.erase(dims.begin() + mode + 1);
  return Tensor<T>(std::move(dims), std::move(x).take_values());
}

// Inverse of merge_modes: split mode m of extent n1*n2 back into (n1, n2).
template <typename T>
Tensor<T> unmerge_modes(Tensor<T> x, int mode, int n1, int n2) {
  if (mode < 0 || mode >= x.order())
    throw dimension_error("unmerge_modes: mode out of range");
  if (n1 <= 0 || n2 <= 0 || x.dim(mode) != n1 * n2)
    throw dimension_error("unmerge_modes: extents do not factor the mode");
  std::vector<int> dims = x.dims();
  dims[mode] = n1;
  dims.insert(dims.begin() + mode + 1, n2);
  return Tensor<T>(std::move(dims), std::move(x).take_values());
}

// d = 2 bridges (same buffer, column-major on both sides).
template <typename T>
Matrix<T> matrix_from_tensor(Tensor<T> x) {
  if (x.order() != 2)
    throw dimension_error("matrix_from_tensor: tensor is not order 2");
  const int r = x.dim(0), c = x.dim(1);
  return Matrix<T>(r, c, std::move(x).take_values());
}

template <typename T>
Tensor<T> tensor_from_matrix(const Matrix<T>& m) {
  return Tensor<T>({m.rows(), m.cols()},
                   std::vector<T>(m.data(), m.data() + m.size()));
}

inline Tensor<Complex> complexified(const Tensor<double>& x) {
  std::vector<Complex> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = Complex(x.data()[i], 0.0);
  return Tensor<Complex>(x.dims(), std::move(v));
}

inline const Tensor<Complex>& complexified(const Tensor<Complex>& x) {
  return x;
}

inline Tensor<double> real_part(const Tensor<Complex>& x) {
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = x.data()[i].real();
  return Tensor<double>(x.dims(), std::move(v));
}

inline double max_imag(const Tensor<Complex>& x) {
  double m = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    m = std::max(m, std::abs(x.data()[i].imag()));
  return m;
}

} // namespace tsylv
