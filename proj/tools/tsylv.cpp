// Command-line front end: solve problems from JSON files, run n_min sweeps
// and scaling benchmarks (CSV), and run the seeded verification suite.
//
// Exit codes: 0 success, 1 I/O or bad input, 2 numerically singular
// operator, 3 factorization non-convergence, 4 verification failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "tsylv/tsylv.hpp"

namespace {

using namespace tsylv;

struct SolveFlags {
  std::string in;
  std::string out;
  int n_min = 0;
  std::string strategy = "merge";
  std::string arithmetic = "complex";
  double tol = 0;
};

struct BenchFlags {
  std::string family = "laplace";
  int d = 0;
  std::vector<int> n;
  std::vector<int> dims;
  std::vector<int> n_min;
  std::string strategy = "both";
  std::uint64_t seed = 1;
  int reps = 5;
  std::string out;
  std::uint64_t mem_cap_bytes = std::uint64_t(2) << 30;
  bool baseline = false;
  double tol = 0;
};

struct VerifyFlags {
  std::uint64_t seed = 1;
  int count = 50;
  std::string out; // directory for solution files
  double tol = 1e-9;
};

SolverConfig config_from(const SolveFlags& f) {
  SolverConfig cfg;
  cfg.n_min = f.n_min;
  cfg.strategy =
      f.strategy == "recursion" ? Strategy::recursion_only : Strategy::merge;
  cfg.arithmetic = f.arithmetic == "real" ? Arithmetic::real_quasitriangular
                                          : Arithmetic::complex_triangular;
  cfg.singularity_tol = f.tol;
  return cfg;
}

template <typename T>
void print_report(const char* family, const std::vector<int>& dims,
                  const SolveReport<T>& rep) {
  std::string shape;
  for (std::size_t i = 0; i < dims.size(); ++i)
    shape += (i ? "x" : "") + std::to_string(dims[i]);
  std::printf("family: %s\n", family);
  std::printf("dims: %s\n", shape.c_str());
  std::printf("strategy: %s\n", to_string(rep.strategy).c_str());
  std::printf("n_min: %d\n", rep.n_min);
  std::printf("residual: %.6e\n", rep.residual);
  std::printf("discarded_imag: %.6e\n", rep.discarded_imag);
  std::printf("reduction_s: %.6e\n", rep.timings.reduction_s);
  std::printf("recursion_s: %.6e\n", rep.timings.recursion_s);
  std::printf("back_transform_s: %.6e\n", rep.timings.back_transform_s);
}

int run_solve(const SolveFlags& f) {
  AnyProblem any = load_problem(f.in);
  const SolverConfig cfg = config_from(f);
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        const char* family =
            std::is_same_v<P, LaplaceProblem<double>> ||
                    std::is_same_v<P, LaplaceProblem<Complex>>
                ? "laplace"
                : "gsylv";
        auto rep = [&] {
          if constexpr (std::is_same_v<P, LaplaceProblem<double>> ||
                        std::is_same_v<P, LaplaceProblem<Complex>>)
            return solve_laplace(p, cfg);
          else
            return solve_gsylv(p, cfg);
        }();
        print_report(family, p.dims(), rep);
        if (!f.out.empty()) save_solution(f.out, p, rep);
      },
      any);
  return 0;
}

void emit_rows(const std::vector<ResultRow>& rows, const std::string& out) {
  std::string text = csv_header() + "\n";
  for (const ResultRow& r : rows) text += to_csv(r) + "\n";
  std::fputs(text.c_str(), stdout);
  if (!out.empty()) {
    std::ofstream file(out, std::ios::binary);
    if (!file) throw io_error("cannot open for writing: " + out);
    file << text;
    if (!file) throw io_error("write failed: " + out);
  }
}

BenchSpec spec_from(const BenchFlags& f) {
  BenchSpec spec;
  spec.family = f.family == "gsylv" ? Family::gsylv : Family::laplace;
  spec.seed = f.seed;
  spec.repetitions = f.reps;
  spec.mem_cap_bytes = f.mem_cap_bytes;
  spec.include_baseline = f.baseline;
  spec.singularity_tol = f.tol;
  spec.n_min_values = f.n_min;
  if (f.strategy == "recursion")
    spec.strategies = {Strategy::recursion_only};
  else if (f.strategy == "merge")
    spec.strategies = {Strategy::merge};
  else
    spec.strategies = {Strategy::recursion_only, Strategy::merge};
  return spec;
}

int run_bench_nmin(const BenchFlags& f) {
  BenchSpec spec = spec_from(f);
  if (!f.dims.empty()) {
    spec.dims = f.dims;
  } else {
    if (f.d < 2 || f.n.empty())
      throw io_error("bench-nmin: pass --dims, or --d with --n");
    spec.dims.assign(static_cast<std::size_t>(f.d), f.n.front());
  }
  emit_rows(bench_nmin(spec), f.out);
  return 0;
}

int run_bench_scaling(const BenchFlags& f) {
  BenchSpec spec = spec_from(f);
  if (f.d < 2 || f.n.empty())
    throw io_error("bench-scaling: pass --d and an --n grid");
  emit_rows(bench_scaling(spec, f.d, f.n), f.out);
  return 0;
}

int run_verify(const VerifyFlags& f) {
  if (!f.out.empty()) std::filesystem::create_directories(f.out);
  VerifyReport vr = tsylv::run_verify(f.seed, f.count, f.out, f.tol);
  std::printf("instances: %d\n", vr.instances);
  std::printf("worst_rel_error: %.6e (%s)\n", vr.worst_rel,
              vr.worst_case.c_str());
  std::printf("worst_residual_vs_bound: %.6e\n", vr.worst_residual);
  std::printf("verify: %s\n", vr.pass ? "PASS" : "FAIL");
  return vr.pass ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recursive blocked solvers for Sylvester-type tensor "
               "equations"};
  app.require_subcommand(1);

  SolveFlags sf;
  CLI::App* solve = app.add_subcommand(
      "solve", "Solve a problem file and report residual and timings");
  solve->add_option("--in", sf.in, "JSON problem file")->required();
  solve->add_option("--out", sf.out, "write the solution file here");
  solve->add_option("--nmin", sf.n_min, "recursion cutoff (0 = tuned default)");
  solve->add_option("--strategy", sf.strategy, "reduced-solve strategy")
      ->check(CLI::IsMember({"recursion", "merge"}));
  solve->add_option("--arithmetic", sf.arithmetic,
                    "complex (triangular) or real (quasi-triangular)")
      ->check(CLI::IsMember({"complex", "real"}));
  solve->add_option("--tol", sf.tol,
                    "singularity tolerance (0 = roundoff-scaled)");

  BenchFlags nf;
  CLI::App* bn = app.add_subcommand(
      "bench-nmin", "Time one instance across a grid of recursion cutoffs");
  bn->add_option("--family", nf.family)->check(CLI::IsMember({"laplace", "gsylv"}));
  bn->add_option("--d", nf.d, "tensor order (with --n)");
  bn->add_option("--n", nf.n, "extent for cubic instances")->delimiter(',');
  bn->add_option("--dims", nf.dims, "explicit extents, e.g. 40,30,20")
      ->delimiter(',');
  bn->add_option("--nmin", nf.n_min, "cutoff grid, e.g. 2,4,8,16")
      ->delimiter(',');
  bn->add_option("--strategy", nf.strategy)
      ->check(CLI::IsMember({"recursion", "merge", "both"}));
  bn->add_option("--seed", nf.seed);
  bn->add_option("--reps", nf.reps, "runs averaged per row");
  bn->add_option("--out", nf.out, "also write the CSV here");
  bn->add_option("--tol", nf.tol, "singularity tolerance");

  BenchFlags scf;
  CLI::App* bs = app.add_subcommand(
      "bench-scaling",
      "Compare strategies (and the flattened baseline) over an extent grid");
  bs->add_option("--family", scf.family)
      ->check(CLI::IsMember({"laplace", "gsylv"}));
  bs->add_option("--d", scf.d, "tensor order")->required();
  bs->add_option("--n", scf.n, "extent grid, e.g. 8,16,24,32")
      ->delimiter(',')
      ->required();
  bs->add_option("--strategy", scf.strategy)
      ->check(CLI::IsMember({"recursion", "merge", "both"}));
  bs->add_flag("--baseline", scf.baseline,
               "also time the flattened one-equation baseline");
  bs->add_option("--seed", scf.seed);
  bs->add_option("--reps", scf.reps);
  bs->add_option("--out", scf.out, "also write the CSV here");
  bs->add_option("--mem-cap-bytes", scf.mem_cap_bytes,
                 "skip the baseline (status=oom) beyond this footprint");
  bs->add_option("--tol", scf.tol, "singularity tolerance");

  VerifyFlags vf;
  CLI::App* ver = app.add_subcommand(
      "verify", "Run the seeded solver-vs-reference suite");
  ver->add_option("--seed", vf.seed);
  ver->add_option("--count", vf.count, "instances per family");
  ver->add_option("--out", vf.out, "directory for solution files");
  ver->add_option("--tol", vf.tol, "relative-error tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1; // help/version exit 0, any parse problem is 1
  }

  try {
    if (*solve) return run_solve(sf);
    if (*bn) return run_bench_nmin(nf);
    if (*bs) return run_bench_scaling(scf);
    return run_verify(vf);
  } catch (const singular_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const factorization_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
