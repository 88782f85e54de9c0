#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "tsylv/config.hpp"
#include "tsylv/errors.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/problems.hpp"
#include "tsylv/tensor.hpp"

namespace tsylv {

// JSON problem files:
//   {"family": "laplace"|"gsylv", "complex": bool, "dims": [n_0,...],
//    "coeffs": [row-major 2-D arrays], "c_coeff": 2-D array (gsylv only),
//    "rhs": flat array in storage order (mode 0 fastest)}
// Scalars are numbers, or [re, im] pairs when "complex" is true.  Solution
// files carry the same envelope plus "solution" and "report".

using AnyProblem = std::variant<LaplaceProblem<double>, LaplaceProblem<Complex>,
                                GSylvProblem<double>, GSylvProblem<Complex>>;

namespace detail {

inline nlohmann::json scalar_to_json(double v) { return v; }
inline nlohmann::json scalar_to_json(const Complex& v) {
  return nlohmann::json::array({v.real(), v.imag()});
}

inline void scalar_from_json(const nlohmann::json& j, double& out) {
  if (!j.is_number()) throw io_error("expected a real number");
  out = j.get<double>();
}
inline void scalar_from_json(const nlohmann::json& j, Complex& out) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw io_error("expected a [re, im] pair");
  out = Complex(j[0].get<double>(), j[1].get<double>());
}

template <typename T>
nlohmann::json matrix_to_json(const Matrix<T>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename T>
Matrix<T> matrix_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw io_error(std::string(what) + ": expected a non-empty 2-D array");
  const int rows = static_cast<int>(j.size());
  if (!j[0].is_array())
    throw io_error(std::string(what) + ": expected nested rows");
  const int cols = static_cast<int>(j[0].size());
  Matrix<T> m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
      throw io_error(std::string(what) + ": ragged rows");
    for (int c = 0; c < cols; ++c) scalar_from_json(j[i][c], m(i, c));
  }
  return m;
}

template <typename T>
nlohmann::json flat_to_json(const std::vector<T>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const T& x : v) out.push_back(scalar_to_json(x));
  return out;
}

template <typename T>
std::vector<T> flat_from_json(const nlohmann::json& j, std::size_t want,
                              const char* what) {
  if (!j.is_array() || j.size() != want)
    throw io_error(std::string(what) + ": expected a flat array of length " +
                   std::to_string(want));
  std::vector<T> out(want);
  for (std::size_t i = 0; i < want; ++i) scalar_from_json(j[i], out[i]);
  return out;
}

template <typename T>
nlohmann::json problem_to_json(const LaplaceProblem<T>& p) {
  nlohmann::json j;
  j["family"] = "laplace";
  j["complex"] = is_complex_v<T>;
  j["dims"] = p.dims();
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& a : p.coeffs) coeffs.push_back(matrix_to_json(a));
  j["coeffs"] = std::move(coeffs);
  j["rhs"] = flat_to_json(p.rhs.values());
  return j;
}

template <typename T>
nlohmann::json problem_to_json(const GSylvProblem<T>& p) {
  nlohmann::json j;
  j["family"] = "gsylv";
  j["complex"] = is_complex_v<T>;
  j["dims"] = p.dims();
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& a : p.coeffs) coeffs.push_back(matrix_to_json(a));
  j["coeffs"] = std::move(coeffs);
  j["c_coeff"] = matrix_to_json(p.c);
  j["rhs"] = flat_to_json(p.rhs.values());
  return j;
}

template <typename T>
AnyProblem problem_from_json_typed(const nlohmann::json& j, bool gsylv) {
  if (!j.contains("dims") || !j["dims"].is_array())
    throw io_error("problem file: missing \"dims\"");
  std::vector<int> dims;
  for (const auto& e : j["dims"]) {
    if (!e.is_number_integer() || e.get<int>() <= 0)
      throw io_error("problem file: dims must be positive integers");
    dims.push_back(e.get<int>());
  }
  if (!j.contains("coeffs") || !j["coeffs"].is_array() ||
      j["coeffs"].size() != dims.size())
    throw io_error("problem file: need one coefficient per mode");
  std::vector<Matrix<T>> coeffs;
  for (std::size_t m = 0; m < dims.size(); ++m)
    coeffs.push_back(matrix_from_json<T>(j["coeffs"][m], "coeffs"));
  std::size_t total = 1;
  for (int n : dims) total *= static_cast<std::size_t>(n);
  if (!j.contains("rhs")) throw io_error("problem file: missing \"rhs\"");
  Tensor<T> rhs(dims, flat_from_json<T>(j["rhs"], total, "rhs"));

  try {
    if (gsylv) {
      if (!j.contains("c_coeff"))
        throw io_error("problem file: gsylv needs \"c_coeff\"");
      GSylvProblem<T> p;
      p.coeffs = std::move(coeffs);
      p.c = matrix_from_json<T>(j["c_coeff"], "c_coeff");
      p.rhs = std::move(rhs);
      validate(p);
      return p;
    }
    LaplaceProblem<T> p;
    p.coeffs = std::move(coeffs);
    p.rhs = std::move(rhs);
    validate(p);
    return p;
  } catch (const dimension_error& e) {
    throw io_error(std::string("problem file: ") + e.what());
  }
}

inline nlohmann::json report_to_json(double residual, double discarded_imag,
                                     int n_min, Strategy strategy,
                                     const PhaseTimings* timings) {
  nlohmann::json r;
  r["residual"] = residual;
  r["discarded_imag"] = discarded_imag;
  r["n_min"] = n_min;
  r["strategy"] = to_string(strategy);
  if (timings) {
    r["timings"] = {{"reduction_s", timings->reduction_s},
                    {"recursion_s", timings->recursion_s},
                    {"back_transform_s", timings->back_transform_s}};
  }
  return r;
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw io_error("write failed: " + path);
}

} // namespace detail

inline AnyProblem problem_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw io_error("problem file: expected a JSON object");
  if (!j.contains("family") || !j["family"].is_string())
    throw io_error("problem file: missing \"family\"");
  const std::string family = j["family"].get<std::string>();
  if (family != "laplace" && family != "gsylv")
    throw io_error("problem file: unknown family \"" + family + "\"");
  const bool cplx = j.value("complex", false);
  const bool gsylv = family == "gsylv";
  if (cplx) return detail::problem_from_json_typed<Complex>(j, gsylv);
  return detail::problem_from_json_typed<double>(j, gsylv);
}

inline AnyProblem load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw io_error("cannot parse " + path + ": " + e.what());
  }
  return problem_from_json(j);
}

template <typename P>
void save_problem(const std::string& path, const P& p) {
  detail::write_json_file(path, detail::problem_to_json(p));
}

// Solution file: problem envelope + flat "solution" + "report".  Timings can
// be left out to make files from repeated runs byte-comparable.
template <typename P, typename T>
void save_solution(const std::string& path, const P& p,
                   const SolveReport<T>& rep, bool include_timings = true) {
  nlohmann::json j = detail::problem_to_json(p);
  j["solution"] = detail::flat_to_json(rep.solution.values());
  j["report"] =
      detail::report_to_json(rep.residual, rep.discarded_imag, rep.n_min,
                             rep.strategy, include_timings ? &rep.timings
                                                           : nullptr);
  detail::write_json_file(path, j);
}

// Reads back the solution tensor (shape from "dims") of a solution file.
template <typename T>
Tensor<T> load_solution(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw io_error("cannot parse " + path + ": " + e.what());
  }
  if (!j.contains("solution")) throw io_error(path + ": not a solution file");
  std::vector<int> dims;
  for (const auto& e : j["dims"]) dims.push_back(e.get<int>());
  std::size_t total = 1;
  for (int n : dims) total *= static_cast<std::size_t>(n);
  return Tensor<T>(dims,
                   detail::flat_from_json<T>(j["solution"], total, "solution"));
}

} // namespace tsylv
