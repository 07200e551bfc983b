#include "sasano/cli_report.hpp"
#include "sasano/errors.hpp"
#include "sasano/galois_classifier.hpp"
#include "sasano/reduction_pipeline.hpp"
#include "sasano/weyl_orbit.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace sasano;

namespace {

std::optional<StopAfter> stop_after_from(const std::optional<std::string>& text) {
  if (!text) return std::nullopt;
  auto s = parse_stop_after(*text);
  if (!s) throw InputError("unknown stop_after value '" + *text + "'");
  return s;
}

std::string prove_json(bool alpha_wasow, const std::optional<std::string>& stop_after, int precision,
                       int orbit_depth) {
  ProofOptions opt;
  opt.alpha_wasow = alpha_wasow;
  opt.stop_after = stop_after_from(stop_after);
  opt.precision = precision;
  opt.orbit_depth = orbit_depth;
  return run_proof(opt).to_json().dump();
}

std::string prove_markdown(bool alpha_wasow, const std::optional<std::string>& stop_after, int precision,
                           int orbit_depth) {
  ProofOptions opt;
  opt.alpha_wasow = alpha_wasow;
  opt.stop_after = stop_after_from(stop_after);
  opt.precision = precision;
  opt.orbit_depth = orbit_depth;
  return run_proof(opt).to_markdown();
}

std::string verify_seed_json(const std::optional<std::string>& params, const std::optional<std::string>& solution) {
  std::optional<ParamTriple> p;
  if (params) p = parse_params(*params);
  std::optional<RationalSolution> sol;
  if (solution) {
    try {
      sol = solution_from_json(nlohmann::json::parse(*solution));
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(std::string("solution is not valid JSON: ") + e.what());
    }
  }
  return run_verify_seed(p, sol).to_json().dump();
}

std::pair<std::string, std::string> orbit_json(int depth, bool check_matsuda) {
  OrbitRun run = run_orbit(depth, check_matsuda);
  return {run.report.to_json().dump(), run.jsonl};
}

std::array<std::string, 3> act(int g, const std::string& params) {
  ParamTriple p = act_on_params(g, parse_params(params));
  return {to_string(p.a0), to_string(p.a1), to_string(p.a2)};
}

std::optional<int> matsuda_row(const std::string& params) { return matsuda_check(parse_params(params)).row; }

std::vector<std::vector<std::string>> nve_matrix(bool alpha_wasow) {
  TowerPtr tower = alpha_wasow ? wasow_tower() : canonical_tower();
  HamiltonianSystem sys = build_extended_system(seed_params());
  DiffSystem nve = extract_nve(variational_matrix(sys, seed_solution()), tower);
  std::vector<std::vector<std::string>> rows(nve.dim());
  for (std::size_t i = 0; i < nve.dim(); ++i) {
    for (std::size_t j = 0; j < nve.dim(); ++j) rows[i].push_back(nve.M(i, j).to_string(nve.variable));
  }
  return rows;
}

// kappa, mu for the two blocks of the canonical run, as exact strings.
std::vector<std::pair<std::string, std::string>> whittaker_parameters() {
  ReductionTrace trace = run_canonical_chain(
      ReferenceData::builtin().system("nve", standard_context(canonical_tower(), "t")));
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& block : block_split(pullback_sixth_root(trace.final_system()), {{0, 1}, {2, 3}})) {
    WhittakerParams w = normalize_whittaker(system_to_scalar(block));
    out.emplace_back(w.kappa.to_string(), w.mu.to_string());
  }
  return out;
}

std::pair<bool, bool> stokes(const std::string& kappa, const std::string& mu, bool with_zero) {
  ExprContext ctx = standard_context(canonical_tower(), "x");
  StokesFlags f = stokes_triviality(parse_constant(kappa, ctx), parse_constant(mu, ctx),
                                    with_zero ? NaturalConvention::WithZero : NaturalConvention::WithoutZero);
  return {f.mu1_trivial, f.mu2_trivial};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact verification engine for the non-integrability certificate";

  static py::exception<InputError> input_error(m, "InputError", PyExc_ValueError);
  static py::exception<VerificationError> verification_error(m, "VerificationError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InputError& e) {
      PyErr_SetString(input_error.ptr(), e.what());
    } catch (const VerificationError& e) {
      PyErr_SetString(verification_error.ptr(), e.what());
    }
  });

  m.def("prove_json", &prove_json, py::arg("alpha_wasow") = false, py::arg("stop_after") = py::none(),
        py::arg("precision") = 20, py::arg("orbit_depth") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("prove_markdown", &prove_markdown, py::arg("alpha_wasow") = false, py::arg("stop_after") = py::none(),
        py::arg("precision") = 20, py::arg("orbit_depth") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("verify_seed_json", &verify_seed_json, py::arg("params") = py::none(), py::arg("solution") = py::none());
  m.def("orbit_json", &orbit_json, py::arg("depth"), py::arg("check_matsuda") = true,
        py::call_guard<py::gil_scoped_release>());
  m.def("act_on_params", &act, py::arg("generator"), py::arg("params"));
  m.def("matsuda_row", &matsuda_row, py::arg("params"));
  m.def("nve_matrix", &nve_matrix, py::arg("alpha_wasow") = false);
  m.def("whittaker_parameters", &whittaker_parameters);
  m.def("stokes_triviality", &stokes, py::arg("kappa"), py::arg("mu"), py::arg("with_zero") = true);
}
