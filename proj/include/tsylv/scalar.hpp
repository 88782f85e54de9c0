#pragma once

#include <complex>
#include <limits>
#include <type_traits>

namespace tsylv {

using Complex = std::complex<double>;

template <typename T> struct is_complex : std::false_type {};
template <typename U> struct is_complex<std::complex<U>> : std::true_type {};
template <typename T> inline constexpr bool is_complex_v = is_complex<T>::value;

template <typename T> struct real_of { using type = T; };
template <typename U> struct real_of<std::complex<U>> { using type = U; };
template <typename T> using real_t = typename real_of<T>::type;

// Unit roundoff u = eps/2 of the working precision.
template <typename T>
inline constexpr real_t<T> unit_roundoff =
    std::numeric_limits<real_t<T>>::epsilon() / real_t<T>(2);

// std::conj(double) promotes to complex, which is useless in templates;
// these keep the scalar type.
inline float conjugate(float x) { return x; }
inline double conjugate(double x) { return x; }
template <typename U> std::complex<U> conjugate(const std::complex<U>& x) {
  return std::conj(x);
}

inline double abs_squared(double x) { return x * x; }
template <typename U> U abs_squared(const std::complex<U>& x) {
  return std::norm(x);
}

} // namespace tsylv
