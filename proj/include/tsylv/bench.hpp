#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "tsylv/config.hpp"
#include "tsylv/errors.hpp"
#include "tsylv/gsylv.hpp"
#include "tsylv/io.hpp"
#include "tsylv/laplace.hpp"
#include "tsylv/oracle.hpp"
#include "tsylv/problems.hpp"
#include "tsylv/random.hpp"

namespace tsylv {

// Timing harness: n_min sweeps, scaling runs against the naive "flatten to
// one matrix equation" baseline, CSV emission, and the seeded verification
// suite.  Benchmark instances use plain Gaussian data (timings do not need
// the conditioning margin the correctness suites use); every run is
// deterministic in (family, dims, seed).

struct BenchSpec {
  Family family = Family::laplace;
  std::vector<int> dims;          // explicit extents of the instance
  std::vector<int> n_min_values;  // empty = the tuned default per strategy
  std::vector<Strategy> strategies{Strategy::recursion_only, Strategy::merge};
  bool include_baseline = false;
  std::uint64_t seed = 1;
  int repetitions = 5; // wall times averaged over consecutive runs
  std::size_t mem_cap_bytes = std::size_t(2) << 30;
  double singularity_tol = 0;
};

struct ResultRow {
  std::string family;
  int d = 0;
  int n = 0; // largest extent
  int n_min = 0;
  std::string strategy; // recursion | merge | sylvester (baseline)
  double wall_mean_s = 0;
  double wall_min_s = 0;
  double residual = 0;
  double discarded_imag = 0;
  std::string status = "ok"; // ok | oom | singular | error
  std::uint64_t seed = 0;
};

inline std::string csv_header() {
  return "family,d,n,n_min,strategy,wall_mean_s,wall_min_s,residual,"
         "discarded_imag,status,seed";
}

inline std::string to_csv(const ResultRow& r) {
  char buf[320];
  std::snprintf(buf, sizeof(buf), "%s,%d,%d,%d,%s,%.6e,%.6e,%.3e,%.3e,%s,%llu",
                r.family.c_str(), r.d, r.n, r.n_min, r.strategy.c_str(),
                r.wall_mean_s, r.wall_min_s, r.residual, r.discarded_imag,
                r.status.c_str(),
                static_cast<unsigned long long>(r.seed));
  return buf;
}

namespace detail {

inline LaplaceProblem<double> bench_laplace_instance(
    std::uint64_t seed, const std::vector<int>& dims) {
  RandomStream rng(seed);
  LaplaceProblem<double> p;
  for (int n : dims) p.coeffs.push_back(randn_matrix<double>(rng, n, n));
  p.rhs = randn_tensor<double>(rng, dims);
  return p;
}

inline GSylvProblem<double> bench_gsylv_instance(std::uint64_t seed,
                                                 const std::vector<int>& dims) {
  RandomStream rng(seed);
  GSylvProblem<double> p;
  for (int n : dims) p.coeffs.push_back(randn_matrix<double>(rng, n, n));
  p.c = randn_matrix<double>(rng, dims[0], dims[0]);
  p.rhs = randn_tensor<double>(rng, dims);
  return p;
}

// Baseline "one matrix equation" reshape: keep mode 0, Kronecker-assemble
// modes 1..d-1 into a single trailing coefficient, and run the ordinary
// d = 2 reduce-and-solve on the pair.  The full Schur form of the big
// assembled block is exactly the cost the recursive solvers avoid.
inline std::size_t baseline_projected_bytes(const std::vector<int>& dims) {
  std::size_t rest = 1;
  for (std::size_t m = 1; m < dims.size(); ++m)
    rest *= static_cast<std::size_t>(dims[m]);
  const std::size_t total = static_cast<std::size_t>(dims[0]) * rest;
  // big coefficient + its Schur vectors + factored copy, plus two tensors
  return (3 * rest * rest + 2 * total) * sizeof(double);
}

inline SolveReport<double> baseline_solve(const LaplaceProblem<double>& p) {
  const int d = p.order();
  Matrix<double> big = p.coeffs[1];
  for (int m = 2; m < d; ++m) big = merge_pair(big, p.coeffs[m]);
  LaplaceProblem<double> flat;
  flat.coeffs = {p.coeffs[0], std::move(big)};
  flat.rhs = Tensor<double>({p.rhs.dim(0),
                             static_cast<int>(p.rhs.size()) / p.rhs.dim(0)},
                            p.rhs.values());
  SolverConfig cfg;
  cfg.strategy = Strategy::recursion_only;
  cfg.arithmetic = Arithmetic::real_quasitriangular;
  return solve_laplace(flat, cfg);
}

inline SolveReport<double> baseline_solve(const GSylvProblem<double>& p) {
  const int d = p.order();
  Matrix<double> big = p.coeffs[1];
  for (int m = 2; m < d; ++m) big = kron(p.coeffs[m], big);
  GSylvProblem<double> flat;
  flat.coeffs = {p.coeffs[0], std::move(big)};
  flat.c = p.c;
  flat.rhs = Tensor<double>({p.rhs.dim(0),
                             static_cast<int>(p.rhs.size()) / p.rhs.dim(0)},
                            p.rhs.values());
  SolverConfig cfg;
  cfg.strategy = Strategy::recursion_only;
  cfg.arithmetic = Arithmetic::real_quasitriangular;
  return solve_gsylv(flat, cfg);
}

template <typename Solve>
ResultRow timed_row(ResultRow row, int repetitions, Solve&& solve) {
  double sum = 0, best = 0;
  for (int r = 0; r < repetitions; ++r) {
    StopWatch sw;
    try {
      SolveReport<double> rep = solve();
      const double t = sw.elapsed_s();
      sum += t;
      best = r == 0 ? t : std::min(best, t);
      row.residual = rep.residual;
      row.discarded_imag = rep.discarded_imag;
    } catch (const singular_error&) {
      row.status = "singular";
      return row;
    } catch (const std::exception&) {
      row.status = "error";
      return row;
    }
  }
  row.wall_mean_s = sum / repetitions;
  row.wall_min_s = best;
  return row;
}

inline ResultRow base_row(const BenchSpec& spec, const std::vector<int>& dims) {
  ResultRow row;
  row.family = to_string(spec.family);
  row.d = static_cast<int>(dims.size());
  row.n = *std::max_element(dims.begin(), dims.end());
  row.seed = spec.seed;
  return row;
}

template <typename Problem>
std::vector<ResultRow> sweep_rows(const BenchSpec& spec,
                                  const Problem& problem,
                                  const std::vector<int>& dims) {
  std::vector<ResultRow> rows;
  for (Strategy strat : spec.strategies) {
    std::vector<int> n_mins = spec.n_min_values;
    if (n_mins.empty())
      n_mins.push_back(default_n_min(spec.family,
                                     static_cast<int>(dims.size()), strat));
    for (int n_min : n_mins) {
      ResultRow row = base_row(spec, dims);
      row.n_min = n_min;
      row.strategy = to_string(strat);
      SolverConfig cfg;
      cfg.n_min = n_min;
      cfg.strategy = strat;
      cfg.singularity_tol = spec.singularity_tol;
      rows.push_back(timed_row(row, spec.repetitions, [&] {
        if constexpr (std::is_same_v<Problem, LaplaceProblem<double>>)
          return solve_laplace(problem, cfg);
        else
          return solve_gsylv(problem, cfg);
      }));
    }
  }
  return rows;
}

template <typename Problem>
ResultRow baseline_row(const BenchSpec& spec, const Problem& problem,
                       const std::vector<int>& dims) {
  ResultRow row = base_row(spec, dims);
  row.strategy = "sylvester";
  row.n_min = 0;
  if (baseline_projected_bytes(dims) > spec.mem_cap_bytes) {
    row.status = "oom";
    return row;
  }
  return timed_row(row, spec.repetitions,
                   [&] { return baseline_solve(problem); });
}

template <typename Fn>
void with_bench_instance(const BenchSpec& spec, const std::vector<int>& dims,
                         Fn&& fn) {
  if (spec.family == Family::laplace)
    fn(bench_laplace_instance(spec.seed, dims));
  else
    fn(bench_gsylv_instance(spec.seed, dims));
}

} // namespace detail

// One instance, a grid of cutoffs: rows for every strategy x n_min.
inline std::vector<ResultRow> bench_nmin(const BenchSpec& spec) {
  if (spec.dims.size() < 2)
    throw dimension_error("bench_nmin: need at least two modes");
  if (spec.repetitions < 1)
    throw dimension_error("bench_nmin: repetitions must be >= 1");
  std::vector<ResultRow> rows;
  detail::with_bench_instance(spec, spec.dims, [&](const auto& problem) {
    rows = detail::sweep_rows(spec, problem, spec.dims);
  });
  return rows;
}

// Cubic instances over a grid of extents: per n, one row per strategy at its
// tuned default cutoff, plus the flattened baseline when requested (skipped
// with status=oom when its projected footprint exceeds the cap).
inline std::vector<ResultRow> bench_scaling(const BenchSpec& spec, int d,
                                            const std::vector<int>& n_grid) {
  if (d < 2) throw dimension_error("bench_scaling: need at least two modes");
  if (spec.repetitions < 1)
    throw dimension_error("bench_scaling: repetitions must be >= 1");
  std::vector<ResultRow> rows;
  for (int n : n_grid) {
    const std::vector<int> dims(static_cast<std::size_t>(d), n);
    BenchSpec local = spec;
    local.dims = dims;
    local.n_min_values.clear(); // defaults per strategy
    detail::with_bench_instance(local, dims, [&](const auto& problem) {
      std::vector<ResultRow> part = detail::sweep_rows(local, problem, dims);
      rows.insert(rows.end(), part.begin(), part.end());
      if (spec.include_baseline)
        rows.push_back(detail::baseline_row(local, problem, dims));
    });
  }
  return rows;
}

// Seeded verification sweep: reduced triangular instances for both families
// and both strategies, each checked against the dense-assembly reference and
// the residual bound.  Writing solution files (timings omitted so repeated
// runs are byte-identical) is optional.
struct VerifyReport {
  bool pass = false;
  int instances = 0;
  double worst_rel = 0;      // solver vs. dense reference
  double worst_residual = 0; // relative residual, scaled by its bound
  std::string worst_case;
};

inline VerifyReport run_verify(std::uint64_t seed, int per_family = 50,
                               const std::string& out_dir = "",
                               double tol = 1e-9) {
  RandomStream rng(seed);
  VerifyReport vr;
  auto note = [&](double rel, double res_ratio, const std::string& label) {
    if (rel > vr.worst_rel) {
      vr.worst_rel = rel;
      vr.worst_case = label;
    }
    vr.worst_residual = std::max(vr.worst_residual, res_ratio);
  };

  auto draw_dims = [&] {
    // d in {2..5}, extents in [2,10], total capped for the dense reference.
    for (;;) {
      const int d = 2 + static_cast<int>(rng.uniform() * 4);
      std::vector<int> dims;
      std::size_t total = 1;
      for (int m = 0; m < d; ++m) {
        dims.push_back(2 + static_cast<int>(rng.uniform() * 9));
        total *= static_cast<std::size_t>(dims.back());
      }
      if (total <= oracle::default_size_cap / 4) return dims;
    }
  };

  for (int k = 0; k < per_family; ++k) {
    const std::vector<int> dims = draw_dims();
    const int n_min = 2 + k % 3;
    const int maxn = *std::max_element(dims.begin(), dims.end());
    const double res_bound = 1e3 * unit_roundoff<double> * maxn;

    LaplaceProblem<Complex> lp = random_reduced_laplace<Complex>(rng, dims);
    Tensor<Complex> lref = oracle::solve(lp);
    Tensor<Complex> lrec = laplace_recursive(lp.coeffs, lp.rhs, n_min);
    Tensor<Complex> lmrg = laplace_merged(lp.coeffs, lp.rhs, n_min);
    {
      Tensor<Complex> drec = lrec, dmrg = lmrg;
      drec -= lref;
      dmrg -= lref;
      const double nref = lref.frobenius_norm();
      note(drec.frobenius_norm() / nref, 0,
           "laplace recursion #" + std::to_string(k));
      note(dmrg.frobenius_norm() / nref, 0,
           "laplace merge #" + std::to_string(k));
      note(0, oracle::residual(lp, lrec) / res_bound, "");
      note(0, oracle::residual(lp, lmrg) / res_bound, "");
    }
    if (!out_dir.empty()) {
      SolveReport<Complex> rep;
      rep.solution = std::move(lmrg);
      rep.residual = oracle::residual(lp, rep.solution);
      rep.n_min = n_min;
      rep.strategy = Strategy::merge;
      save_solution(out_dir + "/verify_laplace_" + std::to_string(k) + ".json",
                    lp, rep, /*include_timings=*/false);
    }

    GSylvProblem<Complex> gp = random_reduced_gsylv<Complex>(rng, dims);
    Tensor<Complex> gref = oracle::solve(gp);
    Tensor<Complex> grec = gsylv_recursive(gp.coeffs, gp.c, gp.rhs, n_min);
    Tensor<Complex> gmrg = gsylv_merged(gp.coeffs, gp.c, gp.rhs, n_min);
    {
      Tensor<Complex> drec = grec, dmrg = gmrg;
      drec -= gref;
      dmrg -= gref;
      const double nref = gref.frobenius_norm();
      note(drec.frobenius_norm() / nref, 0,
           "gsylv recursion #" + std::to_string(k));
      note(dmrg.frobenius_norm() / nref, 0,
           "gsylv merge #" + std::to_string(k));
      note(0, oracle::residual(gp, grec) / res_bound, "");
      note(0, oracle::residual(gp, gmrg) / res_bound, "");
    }
    if (!out_dir.empty()) {
      SolveReport<Complex> rep;
      rep.solution = std::move(gmrg);
      rep.residual = oracle::residual(gp, rep.solution);
      rep.n_min = n_min;
      rep.strategy = Strategy::merge;
      save_solution(out_dir + "/verify_gsylv_" + std::to_string(k) + ".json",
                    gp, rep, /*include_timings=*/false);
    }
    vr.instances += 2;
  }
  vr.pass = vr.worst_rel <= tol && vr.worst_residual <= 1.0;
  return vr;
}

} // namespace tsylv
