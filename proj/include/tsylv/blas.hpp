#pragma once

#include <complex>
#include <cstdlib>
#include <thread>
#include <vector>

// Reference BLAS, Fortran calling convention.
extern "C" {
void dgemm_(const char* transa, const char* transb, const int* m, const int* n,
            const int* k, const double* alpha, const double* a, const int* lda,
            const double* b, const int* ldb, const double* beta, double* c,
            const int* ldc);
void zgemm_(const char* transa, const char* transb, const int* m, const int* n,
            const int* k, const std::complex<double>* alpha,
            const std::complex<double>* a, const int* lda,
            const std::complex<double>* b, const int* ldb,
            const std::complex<double>* beta, std::complex<double>* c,
            const int* ldc);
}

namespace tsylv {

// C <- alpha*op(A)*op(B) + beta*C, column-major, op in {'N','T','C'}.
inline void gemm(char transa, char transb, int m, int n, int k, double alpha,
                 const double* a, int lda, const double* b, int ldb,
                 double beta, double* c, int ldc) {
  if (m == 0 || n == 0) return;
  dgemm_(&transa, &transb, &m, &n, &k, &alpha, a, &lda, b, &ldb, &beta, c,
         &ldc);
}

inline void gemm(char transa, char transb, int m, int n, int k,
                 std::complex<double> alpha, const std::complex<double>* a,
                 int lda, const std::complex<double>* b, int ldb,
                 std::complex<double> beta, std::complex<double>* c, int ldc) {
  if (m == 0 || n == 0) return;
  zgemm_(&transa, &transb, &m, &n, &k, &alpha, a, &lda, b, &ldb, &beta, c,
         &ldc);
}

// Thread cap for internal loop parallelism.  TSYLV_THREADS unset or "0"
// means sequential (the default: callers often parallelise above us).
inline int thread_limit() {
  static const int cached = [] {
    const char* env = std::getenv("TSYLV_THREADS");
    if (!env) return 0;
    int v = std::atoi(env);
    if (v < 0) v = 0;
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw > 0 && v > hw) v = hw;
    return v;
  }();
  return cached;
}

// Runs fn(lo, hi) over a partition of [0, total); sequential unless the
// thread cap allows more and the range is worth splitting.
template <typename F>
void parallel_chunks(int total, F&& fn) {
  int nt = thread_limit();
  if (nt < 2 || total < 2) {
    if (total > 0) fn(0, total);
    return;
  }
  if (nt > total) nt = total;
  std::vector<std::thread> pool;
  pool.reserve(nt - 1);
  int base = total / nt, rem = total % nt, lo = 0;
  for (int t = 0; t < nt; ++t) {
    int hi = lo + base + (t < rem ? 1 : 0);
    if (t == nt - 1)
      fn(lo, hi);
    else
      pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    lo = hi;
  }
  for (auto& th : pool) th.join();
}

} // namespace tsylv
