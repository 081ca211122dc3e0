#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "oil/campaign.hpp"

namespace py = pybind11;
using namespace oil;

namespace {

ToleranceProfile tolerances(std::optional<double> rank_rtol, double verify_atol, double cond_cap) {
  ToleranceProfile t;
  t.rank_rtol = rank_rtol;
  t.verify_atol = verify_atol;
  t.cond_cap = cond_cap;
  t.validate();
  return t;
}

Subspace subspace_of(const Matrix& vectors, const ToleranceProfile& tol) {
  return Subspace::from_spanning_set(vectors, tol);
}

py::dict report_dict(const BoundReport& r) {
  py::dict d;
  d["theorem"] = std::string(to_string(r.theorem));
  d["formula_result"] = r.formula_result;
  d["oracle_result"] = r.oracle_result;
  d["relerr"] = r.formula_vs_oracle_relerr;
  d["norm_bound"] = r.norm_bound;
  d["norm_actual"] = r.norm_actual;
  d["diff_bound"] = r.diff_bound;
  d["diff_actual"] = r.diff_actual;
  d["gap_T"] = r.gap_T;
  d["gap_S"] = r.gap_S;
  d["norm_E"] = r.norm_E;
  d["hypotheses_met"] = r.hypotheses_met;
  d["bounds_hold"] = r.bounds_hold;
  d["consistency_ok"] = r.consistency_ok;
  d["all_satisfied"] = r.all_satisfied;
  return d;
}

}  // namespace

#define TOL_ARGS                                                                        \
  py::arg("rank_rtol") = py::none(), py::arg("verify_atol") = 1e-8, py::arg("cond_cap") = 1e12

PYBIND11_MODULE(_oil, m) {
  m.doc() = "Outer generalized inverses A_{T,S}^(2) and their perturbation bounds";
  m.attr("__version__") = std::string(harness::kVersion);

  py::register_exception<ExistenceError>(m, "ExistenceError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  m.def("pinv", [](const Matrix& a, std::optional<double> rr, double va, double cc) {
    return numlin::pinv(a, tolerances(rr, va, cc));
  }, py::arg("a"), TOL_ARGS);
  m.def("op_norm", &numlin::op_norm, py::arg("a"));
  m.def("rank", [](const Matrix& a, std::optional<double> rr, double va, double cc) {
    return numlin::rank(a, tolerances(rr, va, cc));
  }, py::arg("a"), TOL_ARGS);

  // Subspaces cross the boundary as spanning sets (columns of a 2-D array).
  m.def("orth", [](const Matrix& v) { return subspace_of(v, {}).basis(); }, py::arg("vectors"),
        "Orthonormal basis of the column span");
  m.def("gap_hat", [](const Matrix& mv, const Matrix& nv) {
    return gap_hat(subspace_of(mv, {}), subspace_of(nv, {}));
  }, py::arg("m"), py::arg("n"));
  m.def("delta", [](const Matrix& mv, const Matrix& nv) {
    return delta(subspace_of(mv, {}), subspace_of(nv, {}));
  }, py::arg("m"), py::arg("n"));

  m.def("compute", [](const Matrix& a, const Matrix& t, const Matrix& s, std::optional<double> rr,
                      double va, double cc) {
    const ToleranceProfile tol = tolerances(rr, va, cc);
    return compute({a, subspace_of(t, tol), subspace_of(s, tol)}, tol).G;
  }, py::arg("a"), py::arg("t"), py::arg("s"), TOL_ARGS,
        "A_{T,S}^(2) for T, S given by spanning columns");
  m.def("oracle_compute", [](const Matrix& a, const Matrix& t, const Matrix& s) {
    return oracle_compute({a, subspace_of(t, {}), subspace_of(s, {})});
  }, py::arg("a"), py::arg("t"), py::arg("s"));
  m.def("exists", [](const Matrix& a, const Matrix& t, const Matrix& s) {
    return existence({a, subspace_of(t, {}), subspace_of(s, {})}).exists;
  }, py::arg("a"), py::arg("t"), py::arg("s"));
  m.def("classical", [](const Matrix& a, const std::string& kind, std::optional<Matrix> l) {
    static const std::map<std::string, ClassicalKind> kinds = {
        {"moore_penrose", ClassicalKind::moore_penrose}, {"group", ClassicalKind::group},
        {"drazin", ClassicalKind::drazin}, {"bott_duffin", ClassicalKind::bott_duffin}};
    const auto it = kinds.find(kind);
    if (it == kinds.end()) throw std::invalid_argument("unknown classical inverse " + kind);
    std::optional<Subspace> constraint;
    if (l) constraint = subspace_of(*l, {});
    return classical_cases(a, it->second, {}, constraint).G;
  }, py::arg("a"), py::arg("kind"), py::arg("constraint") = py::none());

  m.def("perturb_A", [](const Matrix& a, const Matrix& t, const Matrix& s, const Matrix& e) {
    return report_dict(perturb_A({a, subspace_of(t, {}), subspace_of(s, {})}, e));
  }, py::arg("a"), py::arg("t"), py::arg("s"), py::arg("e"));
  m.def("perturb_all", [](const Matrix& a, const Matrix& t, const Matrix& s, const Matrix& t_prime,
                          const Matrix& s_prime, const Matrix& e) {
    return report_dict(perturb_all(PerturbationScenario::make(
        {a, subspace_of(t, {}), subspace_of(s, {})}, subspace_of(t_prime, {}),
        subspace_of(s_prime, {}), e)));
  }, py::arg("a"), py::arg("t"), py::arg("s"), py::arg("t_prime"), py::arg("s_prime"), py::arg("e"));
  m.def("stable_bounds", [](const Matrix& a, const Matrix& da) {
    return report_dict(stable_bounds(a, da));
  }, py::arg("a"), py::arg("da"));

  m.def("run_campaign", [](const std::string& config_json) {
    const auto config = harness::campaign_from_json(io::json::parse(config_json));
    harness::CampaignResult result;
    {
      py::gil_scoped_release release;
      result = harness::run_campaign(config);
    }
    const std::string csv = config.format == harness::Format::csv
                                ? harness::render_csv(config, result.rows)
                                : harness::render_json(config, result).dump();
    return py::make_tuple(csv, harness::to_json(result.summary).dump(), result.summary.exit_code());
  }, py::arg("config_json"),
        "Runs a campaign from its JSON text; returns (report, summary_json, exit_code)");
}
