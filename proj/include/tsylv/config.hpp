#pragma once

#include <chrono>
#include <string>

#include "tsylv/errors.hpp"
#include "tsylv/tensor.hpp"

namespace tsylv {

enum class Family { laplace, gsylv };

// How the reduced (triangular) equation is solved once coefficients are in
// Schur form.
enum class Strategy {
  recursion_only, // recursive splitting all the way down to dense base cases
  merge           // fuse a mode pair into one coefficient when cheap enough
};

// Arithmetic of the reduced problem.  Merging requires strictly triangular
// coefficients, hence complex Schur forms; the real variant keeps real
// quasi-triangular forms and is only available with Strategy::recursion_only.
enum class Arithmetic { complex_triangular, real_quasitriangular };

struct SolverConfig {
  int n_min = 0; // recursion cutoff; 0 picks the tuned family/order default
  Strategy strategy = Strategy::merge;
  Arithmetic arithmetic = Arithmetic::complex_triangular;
  double singularity_tol = 0; // 0 picks u * (sum of coefficient norms)
};

// Default recursion cutoffs per family, order and strategy.  The merge
// cutoffs bound the fused pair (modes merge once their extents multiply to
// at most n_min^2), so they sit well above the recursion-only ones.  All of
// them are starting points, not laws: sweep `bench-nmin` on your machine and
// override via SolverConfig::n_min when it matters.
inline int default_n_min(Family family, int d, Strategy strategy) {
  if (d <= 2) return 32;
  if (family == Family::laplace) {
    if (strategy == Strategy::recursion_only) return d == 3 ? 7 : 3;
    return d == 3 ? 26 : (d == 4 ? 18 : 14);
  }
  if (strategy == Strategy::recursion_only) return d == 3 ? 8 : 6;
  return d == 3 ? 15 : 13;
}

// Blocking cutoff handed to the order-2 matrix solvers when a tensor solve
// bottoms out at two modes.  The merge cutoff above decides *when* modes
// fuse; how finely the resulting matrix equation is blocked is a separate
// question, and small blocks keep its assembled base systems cheap while the
// off-diagonal updates stay level-3 BLAS.
inline constexpr int matrix_floor_n_min = 8;

struct PhaseTimings {
  double reduction_s = 0;      // Schur/QZ factorizations
  double recursion_s = 0;      // reduced-equation solve
  double back_transform_s = 0; // multiplying the unitary factors back in
};

template <typename T>
struct SolveReport {
  Tensor<T> solution;
  double residual = 0;       // relative residual of the returned solution
  double discarded_imag = 0; // largest |Im| dropped when realifying
  PhaseTimings timings;
  int n_min = 0; // effective cutoff used
  Strategy strategy = Strategy::merge;
};

inline std::string to_string(Strategy s) {
  return s == Strategy::recursion_only ? "recursion" : "merge";
}
inline std::string to_string(Family f) {
  return f == Family::laplace ? "laplace" : "gsylv";
}

class StopWatch {
public:
  // Seconds since construction or the last lap() call, advancing the mark.
  double lap() {
    const auto t1 = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(t1 - t0_).count();
    t0_ = t1;
    return s;
  }
  double elapsed_s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point t0_ =
      std::chrono::steady_clock::now();
};

} // namespace tsylv
