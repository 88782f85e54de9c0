// Acceptance gate for the tensor Sylvester solver library.  Runs the nine
// release criteria end to end and prints exactly one "criterion N: PASS/FAIL"
// line per criterion, with the measured quantities it judged.  All tolerances
// are pinned here as named constants.
//
// Usage: tsylv_acceptance <path-to-cli-binary>
// The CLI binary is exec'd by the determinism criterion (9).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <type_traits>
#include <vector>

#include "tsylv/tsylv.hpp"

using namespace tsylv;
namespace fs = std::filesystem;

namespace {

constexpr double kU = unit_roundoff<double>;

// criteria 1-2: structured solvers vs. dense reference / vs. each other
constexpr double kOracleTol = 1e-9;
constexpr double kCriterion1Budget = 120.0; // seconds
// criterion 3: relative residual <= kResidualScale * u * max(n_mu)
constexpr double kResidualScale = 1e3;
// criterion 4: t(80)/t(40) for the d=3 merge strategy (ideal 16 = 2^4)
constexpr double kRatioLo = 8.0;
constexpr double kRatioHi = 32.0;
constexpr double kCriterion4Budget = 180.0; // seconds
// criterion 6: diagonal block cap after the perfect-shuffle permutation
constexpr int kMaxShuffleBlock = 4;
// criterion 7: factorization residuals <= kFactorScale * u * n
constexpr double kFactorScale = 100.0;

bool report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s (%s)\n", id, ok ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  return ok;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

double rel_gap(const Tensor<Complex>& a, const Tensor<Complex>& b,
               double ref_norm) {
  Tensor<Complex> d = a;
  d -= b;
  return d.frobenius_norm() / ref_norm;
}

Matrix<double> diag_matrix(const std::vector<double>& v) {
  Matrix<double> m(static_cast<int>(v.size()), static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    m(static_cast<int>(i), static_cast<int>(i)) = v[i];
  return m;
}

// --- criterion 1: four structured solvers vs. the dense reference ----------

struct OracleSweep {
  bool ok = false;
  double worst_rel = 0;
  double worst_residual_ratio = 0; // kept for criterion 3
  double seconds = 0;
  std::string detail;
};

OracleSweep criterion1() {
  OracleSweep out;
  StopWatch sw;
  VerifyReport vr = run_verify(/*seed=*/101, /*per_family=*/50, "", kOracleTol);
  out.seconds = sw.elapsed_s();
  out.worst_rel = vr.worst_rel;
  out.worst_residual_ratio = vr.worst_residual;
  out.ok = vr.worst_rel <= kOracleTol && out.seconds < kCriterion1Budget;
  out.detail = fmt("%d solves, worst rel err %.2e vs %.0e, %.1f s vs %.0f s",
                   4 * vr.instances / 2, vr.worst_rel, kOracleTol, out.seconds,
                   kCriterion1Budget);
  return out;
}

// --- criterion 2: cutoff independence ---------------------------------------

struct CutoffSweep {
  bool ok = false;
  double worst_pair = 0;
  double worst_residual_ratio = 0; // kept for criterion 3
  std::string detail;
};

CutoffSweep criterion2() {
  CutoffSweep out;
  const std::vector<int> dims{12, 12, 12};
  const std::vector<int> cutoffs{2, 3, 4, 6, 12};
  const double res_bound = kResidualScale * kU * 12;
  RandomStream rng(202);

  const LaplaceProblem<Complex> lp = random_reduced_laplace<Complex>(rng, dims);
  const GSylvProblem<Complex> gp = random_reduced_gsylv<Complex>(rng, dims);

  std::vector<Tensor<Complex>> lsol, gsol;
  for (int n_min : cutoffs) {
    lsol.push_back(laplace_recursive(lp.coeffs, lp.rhs, n_min));
    lsol.push_back(laplace_merged(lp.coeffs, lp.rhs, n_min));
    gsol.push_back(gsylv_recursive(gp.coeffs, gp.c, gp.rhs, n_min));
    gsol.push_back(gsylv_merged(gp.coeffs, gp.c, gp.rhs, n_min));
  }
  const double lnorm = lsol.front().frobenius_norm();
  const double gnorm = gsol.front().frobenius_norm();
  for (std::size_t i = 0; i < lsol.size(); ++i) {
    for (std::size_t j = i + 1; j < lsol.size(); ++j) {
      out.worst_pair = std::max(out.worst_pair, rel_gap(lsol[i], lsol[j], lnorm));
      out.worst_pair = std::max(out.worst_pair, rel_gap(gsol[i], gsol[j], gnorm));
    }
    out.worst_residual_ratio =
        std::max({out.worst_residual_ratio,
                  oracle::residual(lp, lsol[i]) / res_bound,
                  oracle::residual(gp, gsol[i]) / res_bound});
  }
  out.ok = out.worst_pair <= kOracleTol;
  out.detail = fmt("n_min in {2,3,4,6,12}, worst pairwise gap %.2e vs %.0e",
                   out.worst_pair, kOracleTol);
  return out;
}

// --- criteria 4 and 5: scaling exponent and method ordering ----------------

struct TimingPair {
  bool ok4 = false, ok5 = false;
  std::string detail4, detail5;
};

TimingPair criterion4_5() {
  TimingPair out;
  BenchSpec spec;
  spec.family = Family::laplace;
  spec.seed = 407;

  StopWatch sw;
  spec.strategies = {Strategy::merge};
  spec.repetitions = 3;
  std::vector<ResultRow> merge_rows = bench_scaling(spec, 3, {40, 80});
  const double merge_seconds = sw.elapsed_s();

  spec.strategies = {Strategy::recursion_only};
  std::vector<ResultRow> rec_rows = bench_scaling(spec, 3, {80});

  spec.strategies = {};
  spec.repetitions = 1; // the flattened baseline runs for minutes
  spec.include_baseline = true;
  std::vector<ResultRow> base_rows = bench_scaling(spec, 3, {80});

  for (const auto* rows : {&merge_rows, &rec_rows, &base_rows})
    for (const ResultRow& r : *rows)
      if (r.status != "ok") {
        out.detail4 = out.detail5 =
            fmt("%s n=%d run ended with status %s", r.strategy.c_str(), r.n,
                r.status.c_str());
        return out;
      }

  const double t40 = merge_rows[0].wall_min_s;
  const double t80 = merge_rows[1].wall_min_s;
  const double ratio = t80 / t40;
  out.ok4 = ratio >= kRatioLo && ratio <= kRatioHi &&
            merge_seconds < kCriterion4Budget;
  out.detail4 = fmt("merge d=3: t(40)=%.3f s, t(80)=%.3f s, ratio %.1f in "
                    "[%.0f,%.0f], measured in %.0f s vs %.0f s",
                    t40, t80, ratio, kRatioLo, kRatioHi, merge_seconds,
                    kCriterion4Budget);

  const double t_rec = rec_rows[0].wall_min_s;
  const double t_base = base_rows[0].wall_min_s;
  out.ok5 = t80 < t_rec && t80 < t_base;
  out.detail5 = fmt("d=3 n=80: merge %.3f s < recursion %.3f s and < "
                    "flattened baseline %.3f s",
                    t80, t_rec, t_base);
  return out;
}

// --- criterion 6: shuffled merge structure ----------------------------------

bool criterion6() {
  RandomStream rng(606);
  int worst_block = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n1 = 2 + static_cast<int>(rng.uniform() * 7);
    const int n2 = 2 + static_cast<int>(rng.uniform() * 7);
    const Matrix<double> a1 = randn_quasi_triangular(rng, n1, 0.5);
    const Matrix<double> a2 = randn_quasi_triangular(rng, n2, 0.5);
    for (MergedForm form : {MergedForm::kron_sum, MergedForm::kron_product}) {
      const Matrix<double> merged =
          form == MergedForm::kron_sum ? merge_pair(a1, a2) : kron(a2, a1);
      const ShuffleBlockStructure sbs =
          shuffle_block_structure(a1, a2, form);
      int total = 0;
      for (int b : sbs.block_sizes) {
        worst_block = std::max(worst_block, b);
        total += b;
      }
      if (total != n1 * n2 || worst_block > kMaxShuffleBlock)
        return report(6, false,
                      fmt("trial %d: blocks sum to %d of %d, max block %d",
                          trial, total, n1 * n2, worst_block));
      const Matrix<double> shuffled =
          permutation_congruence(merged, sbs.permutation);
      // everything strictly below the block diagonal must be exactly zero
      int row0 = 0;
      for (int b : sbs.block_sizes) {
        for (int j = row0; j < row0 + b; ++j)
          for (int i = row0 + b; i < shuffled.rows(); ++i)
            if (shuffled(i, j) != 0.0)
              return report(6, false,
                            fmt("trial %d: nonzero below block row %d",
                                trial, row0 + b));
        row0 += b;
      }
    }
  }
  return report(6, true,
                fmt("20 quasi-triangular pairs, both merged forms: blocks "
                    "<= %d (max seen %d), sub-block pattern exactly zero",
                    kMaxShuffleBlock, worst_block));
}

// --- criterion 7: factorization contracts -----------------------------------

bool criterion7() {
  RandomStream rng(707);
  double worst = 0; // residual / (100 u n)
  auto track = [&](double res, double bound) {
    worst = std::max(worst, res / bound);
  };
  auto unitarity = [](const auto& q) {
    auto g = matmul(q, q, 'C', 'N');
    g -= std::remove_cvref_t<decltype(q)>::identity(q.rows());
    return g.frobenius_norm();
  };

  for (int k = 0; k < 100; ++k) {
    const int n = 2 + static_cast<int>(rng.uniform() * 63);
    const double bound = kFactorScale * kU * n;
    if (k % 4 == 0) {
      const Matrix<double> a = randn_matrix<double>(rng, n, n);
      const SchurFactorization<double> f = schur(a);
      Matrix<double> rec = matmul(matmul(f.u, f.t), f.u, 'N', 'C');
      rec -= a;
      track(rec.frobenius_norm() / a.frobenius_norm(), bound);
      track(unitarity(f.u), bound);
    } else if (k % 4 == 1) {
      const Matrix<Complex> a = randn_matrix<Complex>(rng, n, n);
      const SchurFactorization<Complex> f = schur(a);
      Matrix<Complex> rec = matmul(matmul(f.u, f.t), f.u, 'N', 'C');
      rec -= a;
      track(rec.frobenius_norm() / a.frobenius_norm(), bound);
      track(unitarity(f.u), bound);
    } else if (k % 4 == 2) {
      const Matrix<double> a = randn_matrix<double>(rng, n, n);
      const Matrix<double> c = randn_matrix<double>(rng, n, n);
      const GeneralizedSchurFactorization<double> f = qz(a, c);
      Matrix<double> ra = matmul(matmul(f.u, f.s), f.z, 'N', 'C');
      Matrix<double> rc = matmul(matmul(f.u, f.t), f.z, 'N', 'C');
      ra -= a;
      rc -= c;
      track(ra.frobenius_norm() / a.frobenius_norm(), bound);
      track(rc.frobenius_norm() / c.frobenius_norm(), bound);
      track(unitarity(f.u), bound);
      track(unitarity(f.z), bound);
    } else {
      const Matrix<Complex> a = randn_matrix<Complex>(rng, n, n);
      const Matrix<Complex> c = randn_matrix<Complex>(rng, n, n);
      const GeneralizedSchurFactorization<Complex> f = qz(a, c);
      Matrix<Complex> ra = matmul(matmul(f.u, f.s), f.z, 'N', 'C');
      Matrix<Complex> rc = matmul(matmul(f.u, f.t), f.z, 'N', 'C');
      ra -= a;
      rc -= c;
      track(ra.frobenius_norm() / a.frobenius_norm(), bound);
      track(rc.frobenius_norm() / c.frobenius_norm(), bound);
      track(unitarity(f.u), bound);
      track(unitarity(f.z), bound);
    }
  }
  return report(7, worst <= 1.0,
                fmt("100 factorizations up to n=64, worst residual at %.3f "
                    "of the %.0f*u*n bound",
                    worst, kFactorScale));
}

// --- criterion 8: singular operators are rejected with a usable witness ----

bool criterion8() {
  RandomStream rng(808);
  SolverConfig cfg;
  cfg.singularity_tol = 1e-8;
  std::string note;

  {
    // Kronecker-sum family: diagonal spectra {1,2}, {4,5}, {-5,3}; the only
    // vanishing combination is 1 + 4 + (-5) at slots (0,0,0).
    LaplaceProblem<double> p;
    p.coeffs = {diag_matrix({1, 2}), diag_matrix({4, 5}), diag_matrix({-5, 3})};
    p.rhs = randn_tensor<double>(rng, {2, 2, 2});

    const Solvability s = check_solvable_laplace(p.coeffs, cfg.singularity_tol);
    if (s.solvable || s.witness != std::vector<int>{0, 0, 0} ||
        std::abs(s.witness_values[0] - 1.0) > 1e-12 ||
        std::abs(s.witness_values[1] - 4.0) > 1e-12 ||
        std::abs(s.witness_values[2] + 5.0) > 1e-12)
      return report(8, false, "sum-family witness missed slots (0,0,0)");

    bool rejected = false;
    try {
      solve_laplace(p, cfg);
    } catch (const singular_error& e) {
      std::complex<double> sum = 0;
      for (const auto& v : e.values()) sum += v;
      rejected = e.indices().size() == 3 && std::abs(sum) <= 1e-10 &&
                 e.min_abs() <= cfg.singularity_tol;
    }
    if (!rejected)
      return report(8, false, "sum-family singular solve was not rejected");

    p.coeffs[0](s.witness[0], s.witness[0]) += 1.0;
    const SolveReport<double> rep = solve_laplace(p, cfg);
    if (rep.residual > kResidualScale * kU * 2)
      return report(8, false,
                    fmt("sum-family perturbed solve residual %.2e", rep.residual));
    note = fmt("sum witness (0,0,0) values (1,4,-5), perturbed residual %.1e",
               rep.residual);
  }

  {
    // Product family: a0 = diag(-6,1), c = I, factor spectra {2,3} and {3,7};
    // the only vanishing combination is -6 + 1*(2*3) at slots (0,0,0).
    GSylvProblem<double> p;
    p.coeffs = {diag_matrix({-6, 1}), diag_matrix({2, 3}), diag_matrix({3, 7})};
    p.c = Matrix<double>::identity(2);
    p.rhs = randn_tensor<double>(rng, {2, 2, 2});

    const Solvability s =
        check_solvable_gsylv(p.coeffs, p.c, cfg.singularity_tol);
    if (s.solvable || s.witness != std::vector<int>{0, 0, 0} ||
        std::abs(s.witness_values[0] + 6.0) > 1e-12 ||
        std::abs(s.witness_values[1] - 1.0) > 1e-12 ||
        std::abs(s.witness_values[2] - 2.0) > 1e-12 ||
        std::abs(s.witness_values[3] - 3.0) > 1e-12)
      return report(8, false, "product-family witness missed slots (0,0,0)");

    bool rejected = false;
    try {
      solve_gsylv(p, cfg);
    } catch (const singular_error& e) {
      // reported combination a0_ss + c_ss * prod(tail eigenvalues) vanishes
      std::complex<double> prod = 1;
      for (std::size_t i = 2; i < e.values().size(); ++i) prod *= e.values()[i];
      const std::complex<double> combo = e.values()[0] + e.values()[1] * prod;
      rejected = e.indices().size() == 3 && std::abs(combo) <= 1e-10 &&
                 e.min_abs() <= cfg.singularity_tol;
    }
    if (!rejected)
      return report(8, false, "product-family singular solve was not rejected");

    p.coeffs[0](s.witness[0], s.witness[0]) += 1.0;
    const SolveReport<double> rep = solve_gsylv(p, cfg);
    if (rep.residual > kResidualScale * kU * 2)
      return report(8, false,
                    fmt("product-family perturbed solve residual %.2e",
                        rep.residual));
    note += fmt("; product witness (0,0,0) values (-6,1,2,3), perturbed "
                "residual %.1e",
                rep.residual);
  }
  return report(8, true, note);
}

// --- criterion 9: deterministic verification output -------------------------

bool criterion9(const std::string& cli) {
  const fs::path base = fs::temp_directory_path() / "tsylv_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);
  auto run = [&](const fs::path& out) {
    const std::string cmd = cli + " verify --seed 777 --count 10 --out " +
                            out.string() + " > " +
                            (base / "cli.log").string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    return raw == -1 ? -1 : WEXITSTATUS(raw);
  };
  const fs::path dir_a = base / "run_a", dir_b = base / "run_b";
  const int rc_a = run(dir_a);
  const int rc_b = run(dir_b);
  if (rc_a != 0 || rc_b != 0)
    return report(9, false,
                  fmt("verification runs exited with %d and %d", rc_a, rc_b));

  auto bytes = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
  };
  int files = 0;
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    const std::string body = bytes(entry.path());
    const fs::path twin = dir_b / entry.path().filename();
    if (body.empty() || !fs::exists(twin) || body != bytes(twin))
      return report(9, false,
                    fmt("%s differs between runs",
                        entry.path().filename().string().c_str()));
    ++files;
  }
  const int twin_count = static_cast<int>(
      std::distance(fs::directory_iterator(dir_b), fs::directory_iterator{}));
  if (files != 20 || twin_count != files)
    return report(9, false, fmt("expected 20 solution files, saw %d and %d",
                                files, twin_count));
  return report(9, true,
                fmt("%d solution files byte-identical across two runs", files));
}

} // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-cli-binary>\n", argv[0]);
    return 2;
  }
  bool all = true;
  auto guard = [&](int id, auto&& fn) {
    try {
      all &= fn();
    } catch (const std::exception& e) {
      all &= report(id, false, fmt("unexpected exception: %s", e.what()));
    }
  };

  double residual_ratio_12 = 0; // worst residual across criteria 1-2 solves
  guard(1, [&] {
    const OracleSweep s = criterion1();
    residual_ratio_12 = std::max(residual_ratio_12, s.worst_residual_ratio);
    return report(1, s.ok, s.detail);
  });
  guard(2, [&] {
    const CutoffSweep s = criterion2();
    residual_ratio_12 = std::max(residual_ratio_12, s.worst_residual_ratio);
    return report(2, s.ok, s.detail);
  });
  guard(3, [&] {
    return report(3, residual_ratio_12 > 0 && residual_ratio_12 <= 1.0,
                  fmt("every criteria 1-2 solve at <= %.2e of the "
                      "%.0e*u*max(n) residual bound",
                      residual_ratio_12, kResidualScale));
  });
  {
    TimingPair t; // criteria 4 and 5 share one set of timed runs
    try {
      t = criterion4_5();
    } catch (const std::exception& e) {
      t.detail4 = t.detail5 = fmt("unexpected exception: %s", e.what());
    }
    all &= report(4, t.ok4, t.detail4);
    all &= report(5, t.ok5, t.detail5);
  }
  guard(6, [&] { return criterion6(); });
  guard(7, [&] { return criterion7(); });
  guard(8, [&] { return criterion8(); });
  guard(9, [&] { return criterion9(argv[1]); });

  std::printf("acceptance: %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
