#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mfix/applications.hpp"
#include "mfix/cli.hpp"
#include "mfix/config.hpp"
#include "mfix/errors.hpp"
#include "mfix/solver.hpp"
#include "mfix/systems.hpp"
#include "mfix/verify.hpp"

namespace py = pybind11;
using namespace mfix;

namespace {

py::dict result_dict(const FixedPointResult& r) {
  py::dict d;
  d["solution"] = r.solution.components();
  d["iterations"] = r.iterations;
  d["residual"] = r.residual;
  d["gap"] = r.gap;
  d["defect"] = r.defect;
  d["status"] = std::string(to_string(r.status));
  d["converged"] = r.converged();
  d["bracket_valid"] = r.bracket_valid;
  return d;
}

PartiallyMonotoneSystem affine_from(const Matrix& matrix, const Vector& offset,
                                    const DimensionProfile& profile) {
  return affine_system(affine_signature(matrix, profile), matrix, offset, profile);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Coupled fixed-point iteration for partially monotone systems";

  auto base = py::register_exception<Error>(m, "MfixError");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<StructuralError>(m, "StructuralError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  m.def("classify", [](const std::string& signature) {
    const auto v = classify_reducibility(MonotoneSignature::parse(signature));
    return py::make_tuple(v.reducible, v.witness);
  }, py::arg("signature"),
        "Reducibility of a signature such as '+-/-+' and the sign witness, if any.");

  m.def("count_reducible", [](std::size_t n) {
    const auto c = count_reducible(n);
    return py::make_tuple(c.total, c.reducible);
  }, py::arg("n"));

  m.def("affine_signature", [](const Matrix& matrix, const DimensionProfile& profile) {
    return affine_signature(matrix, profile).to_string();
  }, py::arg("matrix"), py::arg("profile"));

  m.def("solve_affine",
        [](const Matrix& matrix, const Vector& offset, const DimensionProfile& profile,
           std::optional<Vector> start_u, std::optional<Vector> start_v,
           double tolerance, std::size_t max_iterations) {
          const auto sys = affine_from(matrix, offset, profile);
          SolveConfig cfg;
          cfg.tolerance = tolerance;
          cfg.max_iterations = max_iterations;
          const auto zero = ProductPoint::filled(profile, 0.0);
          const auto u = start_u ? ProductPoint::from_flat(*start_u, profile) : zero;
          const auto v = start_v ? ProductPoint::from_flat(*start_v, profile) : zero;
          return result_dict(solve(sys, u, v, cfg));
        },
        py::arg("matrix"), py::arg("offset"), py::arg("profile"),
        py::arg("start_u") = py::none(), py::arg("start_v") = py::none(),
        py::arg("tolerance") = 1e-10, py::arg("max_iterations") = 1000);

  m.def("verify_affine",
        [](const Matrix& matrix, const Vector& offset, const DimensionProfile& profile,
           double alpha, double lower, double upper, std::size_t samples,
           std::uint64_t seed) {
          const auto sys = affine_from(matrix, offset, profile);
          const auto rep =
              verify_contraction(sys, ComparisonFunction::linear(alpha),
                                 SamplingBox::uniform(profile, lower, upper), samples, seed);
          py::dict d;
          d["certified"] = rep.certified;
          d["max_ratio"] = rep.max_ratio;
          d["violations"] = rep.violations.size();
          d["samples"] = rep.samples;
          return d;
        },
        py::arg("matrix"), py::arg("offset"), py::arg("profile"), py::arg("alpha"),
        py::arg("lower") = -1.0, py::arg("upper") = 1.0, py::arg("samples") = 1000,
        py::arg("seed") = 1);

  m.def("solve_tripled",
        [](std::function<Vector(const Vector&, const Vector&, const Vector&)> F,
           std::size_t dimension, double tolerance, std::size_t max_iterations) {
          TripledProblem p;
          p.F = std::move(F);
          p.dimension = dimension;
          SolveConfig cfg;
          cfg.tolerance = tolerance;
          cfg.max_iterations = max_iterations;
          const auto zero = ProductPoint::filled({dimension, dimension, dimension}, 0.0);
          return result_dict(solve(tripled_to_system(p), zero, zero, cfg));
        },
        py::arg("F"), py::arg("dimension") = 1, py::arg("tolerance") = 1e-10,
        py::arg("max_iterations") = 1000,
        "Solve x = F(x,y,z), y = F(y,x,z), z = F(z,y,x); F maps three lists to a list.");

  m.def("green_kernel", &green_kernel, py::arg("lam"), py::arg("period"), py::arg("t"),
        py::arg("s"));

  m.def("solve_pbvs",
        [](const std::string& rhs, double lam, std::size_t grid_size,
           const ParameterMap& params, double tolerance) {
          const auto& entry = find_rhs(rhs);
          ParameterMap merged = entry.defaults;
          for (const auto& [k, v] : params) {
            if (!merged.contains(k)) throw ConfigError("unknown parameter " + k);
            merged[k] = v;
          }
          PbvsProblem p;
          p.lambda = lam;
          p.period = entry.period;
          p.grid_size = grid_size;
          p.phi = entry.phi;
          p.f = entry.make(merged, lam, p.period);
          p.validate();
          SolveConfig cfg;
          cfg.tolerance = tolerance;
          cfg.phi = p.phi;
          const auto sol = solve_pbvs(p, std::nullopt, cfg);
          py::dict d = result_dict(sol.result);
          d["t"] = sol.t;
          d["x"] = sol.x;
          d["y"] = sol.y;
          d["z"] = sol.z;
          d["pbvs_defect"] = sol.defect;
          return d;
        },
        py::arg("rhs"), py::arg("lam") = 1.0, py::arg("grid_size") = 129,
        py::arg("params") = ParameterMap{}, py::arg("tolerance") = 1e-10);

  m.def("normalize_config", [](const std::string& text) {
    return serialize_config(parse_config(text));
  }, py::arg("text"), "Parse a problem file and print it in canonical form.");

  m.def("run", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Run the command-line frontend; returns (exit code, stdout, stderr).");
}
