#include "oil/io.hpp"

#include <cmath>
#include <stdexcept>

namespace oil::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

const json& field(const json& j, const char* key, const char* context) {
  if (!j.is_object()) fail(std::string(context) + ": expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) fail(std::string(context) + ": missing field \"" + key + "\"");
  return *it;
}

Index nonneg_int(const json& j, const char* key, const char* context) {
  const json& v = field(j, key, context);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    fail(std::string(context) + ": \"" + key + "\" must be a non-negative integer");
  return static_cast<Index>(v.get<long long>());
}

double finite_number(const json& v, const std::string& context) {
  if (!v.is_number()) fail(context + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(context + ": non-finite number");
  return d;
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (const auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace

json to_json(const Matrix& m) {
  json entries = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index k = 0; k < m.cols(); ++k) entries.push_back({m(i, k).real(), m(i, k).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const json& j) {
  const Index rows = nonneg_int(j, "rows", "matrix");
  const Index cols = nonneg_int(j, "cols", "matrix");
  const json& entries = field(j, "entries", "matrix");
  if (!entries.is_array()) fail("matrix: \"entries\" must be an array");
  if (static_cast<Index>(entries.size()) != rows * cols)
    fail("matrix: expected " + std::to_string(rows * cols) + " entries, found " +
         std::to_string(entries.size()));
  Matrix m(rows, cols);
  for (Index idx = 0; idx < rows * cols; ++idx) {
    const json& e = entries[static_cast<std::size_t>(idx)];
    const std::string where = "matrix entry " + std::to_string(idx);
    if (!e.is_array() || e.size() != 2) fail(where + ": expected [re, im]");
    m(idx / cols, idx % cols) = Complex(finite_number(e[0], where), finite_number(e[1], where));
  }
  return m;
}

json to_json(const Subspace& s) {
  return {{"ambient_dim", s.ambient_dim()}, {"basis", to_json(s.basis())}};
}

Subspace subspace_from_json(const json& j, const ToleranceProfile& tol) {
  const Index ambient = nonneg_int(j, "ambient_dim", "subspace");
  const Matrix basis = matrix_from_json(field(j, "basis", "subspace"));
  if (basis.rows() != ambient)
    fail("subspace: basis has " + std::to_string(basis.rows()) + " rows but ambient_dim is " +
         std::to_string(ambient));
  if (basis.cols() == 0) return Subspace::trivial(ambient);
  Subspace s = Subspace::from_spanning_set(basis, tol);
  if (s.dim() != basis.cols())
    fail("subspace: basis has rank " + std::to_string(s.dim()) + " but declares " +
         std::to_string(basis.cols()) + " columns");
  return s;
}

OuterInverseProblem problem_from_json(const json& j, const ToleranceProfile& tol) {
  return {matrix_from_json(field(j, "A", "problem")), subspace_from_json(field(j, "T", "problem"), tol),
          subspace_from_json(field(j, "S", "problem"), tol)};
}

json to_json(const OuterInverseProblem& p) {
  return {{"A", to_json(p.A)}, {"T", to_json(p.T)}, {"S", to_json(p.S)}};
}

json to_json(const OuterInverseResult& r) {
  return {{"G", to_json(r.G)},
          {"residuals",
           {{"gag", r.residual_gag}, {"range_gap", r.range_gap}, {"null_gap", r.null_gap}}}};
}

json to_json(const ToleranceProfile& t) {
  json j = {{"verify_atol", t.verify_atol}, {"cond_cap", t.cond_cap}};
  j["rank_rtol"] = t.rank_rtol ? json(*t.rank_rtol) : json(nullptr);
  return j;
}

ToleranceProfile tolerance_from_json(const json& j) {
  if (!j.is_object()) fail("tolerances: expected a JSON object");
  ToleranceProfile t;
  if (const auto it = j.find("rank_rtol"); it != j.end() && !it->is_null())
    t.rank_rtol = finite_number(*it, "tolerances.rank_rtol");
  if (const auto it = j.find("verify_atol"); it != j.end())
    t.verify_atol = finite_number(*it, "tolerances.verify_atol");
  if (const auto it = j.find("cond_cap"); it != j.end())
    t.cond_cap = finite_number(*it, "tolerances.cond_cap");
  t.validate();
  return t;
}

json to_json(const GenConfig& c) {
  return {{"seed", c.seed},
          {"m", c.m},
          {"n", c.n},
          {"rank_A", c.rank_A},
          {"dim_T", c.dim_T},
          {"max_dim", c.max_dim},
          {"target_gap_T", c.target_gap_T},
          {"target_gap_S", c.target_gap_S},
          {"target_norm_E_ratio", c.target_norm_E_ratio},
          {"max_retries", c.max_retries},
          {"max_conditioning", c.max_conditioning}};
}

GenConfig gen_config_from_json(const json& j) {
  if (!j.is_object()) fail("gen: expected a JSON object");
  GenConfig c;
  try {
    read_opt(j, "seed", c.seed);
    read_opt(j, "m", c.m);
    read_opt(j, "n", c.n);
    read_opt(j, "rank_A", c.rank_A);
    read_opt(j, "dim_T", c.dim_T);
    read_opt(j, "max_dim", c.max_dim);
    read_opt(j, "target_gap_T", c.target_gap_T);
    read_opt(j, "target_gap_S", c.target_gap_S);
    read_opt(j, "target_norm_E_ratio", c.target_norm_E_ratio);
    read_opt(j, "max_retries", c.max_retries);
    read_opt(j, "max_conditioning", c.max_conditioning);
  } catch (const json::exception& e) {
    fail(std::string("gen: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const HypothesisStatus& h) {
  return {{"name", h.name}, {"threshold", h.threshold}, {"observed", h.observed},
          {"satisfied", h.satisfied}};
}

json to_json(const PerturbationScenario& sc) {
  return {{"base", to_json(sc.base)},
          {"T_prime", to_json(sc.T_prime)},
          {"S_prime", to_json(sc.S_prime)},
          {"E", to_json(sc.E)},
          {"gap_T", sc.gap_T},
          {"gap_S", sc.gap_S},
          {"norm_E", sc.norm_E}};
}

}  // namespace oil::io
