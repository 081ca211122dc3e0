#include "oil/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oil {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFormulaRelTol = 1e-8;

// x / denom, or +inf when the premise making denom positive has failed.
double guarded_ratio(double x, double denom) { return denom > 0.0 ? x / denom : kInf; }

Matrix perp_projector(const Subspace& s) { return projector(orthogonal_complement(s)); }

void finish(BoundReport& r, double scale) {
  r.formula_vs_oracle_relerr = numlin::relative_error(r.formula_result, r.oracle_result);
  r.hypotheses_met = std::all_of(r.hypotheses.begin(), r.hypotheses.end(),
                                 [](const HypothesisStatus& h) { return h.satisfied; });
  r.bounds_hold = within_bound(r.norm_actual, r.norm_bound, scale) &&
                  within_bound(r.diff_actual, r.diff_bound, scale);
  r.all_satisfied = r.hypotheses_met && r.bounds_hold && r.consistency_ok &&
                    r.formula_vs_oracle_relerr <= kFormulaRelTol;
}

}  // namespace

std::string_view to_string(Theorem t) {
  switch (t) {
    case Theorem::lemma21: return "lemma21";
    case Theorem::lemma31: return "lemma31";
    case Theorem::prop31: return "prop31";
    case Theorem::prop32: return "prop32";
    case Theorem::thm31: return "thm31";
    case Theorem::lemma32: return "lemma32";
    case Theorem::thm32: return "thm32";
  }
  return "?";
}

std::optional<Theorem> theorem_from_string(std::string_view name) {
  for (Theorem t : kAllTheorems)
    if (to_string(t) == name) return t;
  return std::nullopt;
}

bool within_bound(double actual, double bound, double scale) {
  if (std::isnan(actual) || std::isnan(bound)) return false;
  if (bound == kInf) return true;
  return actual <= bound * (1.0 + kBoundRelSlack) + kBoundAbsFloor * scale;
}

PerturbationScenario PerturbationScenario::make(OuterInverseProblem base, Subspace t_prime,
                                                Subspace s_prime, Matrix e) {
  if (e.rows() != base.A.rows() || e.cols() != base.A.cols())
    throw std::invalid_argument("E must have the shape of A");
  numlin::require_finite(e, "E");
  const double gt = gap_hat(base.T, t_prime);
  const double gs = gap_hat(base.S, s_prime);
  const double ne = numlin::op_norm(e);
  return {std::move(base), std::move(t_prime), std::move(s_prime), std::move(e), gt, gs, ne};
}

// ---------------------------------------------------------------------------
// Stable perturbation of the Moore-Penrose inverse

StableReport is_stable(const Matrix& a, const Matrix& da, const ToleranceProfile& tol) {
  if (da.rows() != a.rows() || da.cols() != a.cols())
    throw std::invalid_argument("is_stable: dA must have the shape of A");
  const Matrix a_pinv = numlin::pinv(a, tol);
  const Matrix a_bar = a + da;

  StableReport rep;
  rep.hypothesis = HypothesisStatus::check("lemma21_smallness", 1.0,
                                           numlin::op_norm(a_pinv) * numlin::op_norm(da));
  rep.cond1 = intersection_trivial(range_of(a_bar, tol), orthogonal_complement(range_of(a, tol)), tol);
  rep.cond2 = intersection_trivial(orthogonal_complement(kernel_of(a_bar, tol)), kernel_of(a, tol), tol);

  try {
    const Index m = a.rows(), n = a.cols();
    // C = A^+ (I + dA A^+)^-1, solved through the adjoint system.
    const Matrix right_res = Matrix::Identity(m, m) + da * a_pinv;
    const Matrix c = numlin::solve_square(right_res.adjoint(), a_pinv.adjoint(), tol).adjoint();
    const Matrix c_left =
        numlin::solve_square(Matrix::Identity(n, n) + a_pinv * da, a_pinv, tol);

    const double nb = numlin::op_norm(a_bar), nc = numlin::op_norm(c);
    const double r1 = numlin::op_norm(a_bar * c * a_bar - a_bar);
    const double r2 = numlin::op_norm(c * a_bar * c - c);
    const double forms = numlin::op_norm(c - c_left);
    rep.cond3_formula_valid = r1 <= tol.verify_atol * (1.0 + nb) * (1.0 + nb) * (1.0 + nc) &&
                              r2 <= tol.verify_atol * (1.0 + nc) * (1.0 + nc) * (1.0 + nb) &&
                              forms <= tol.verify_atol * (1.0 + nc);
    if (rep.cond3_formula_valid) rep.gi_matrix = c;
  } catch (const IllConditioned&) {
    rep.cond3_formula_valid = false;
  }
  return rep;
}

BoundReport stable_bounds(const Matrix& a, const Matrix& da, const ToleranceProfile& tol) {
  const StableReport stable = is_stable(a, da, tol);
  const Matrix a_pinv = numlin::pinv(a, tol);
  const Matrix a_bar = a + da;

  BoundReport r;
  r.theorem = Theorem::lemma21;
  r.norm_E = numlin::op_norm(da);
  r.hypotheses = {stable.hypothesis,
                  HypothesisStatus::check("lemma21_stable", 0.5, stable.cond1 ? 0.0 : 1.0)};
  r.consistency_ok = !stable.hypothesis.satisfied || stable.conditions_agree();
  r.oracle_result = numlin::pinv(a_bar, tol);
  // Projecting the {1,2}-inverse of the resolvent formula onto N(Abar)^perp and
  // R(Abar) turns it into Abar^+.
  r.formula_result = stable.gi_matrix ? mp_via_12_inverse(a_bar, *stable.gi_matrix, tol)
                                      : Matrix::Constant(a.cols(), a.rows(), Complex(kInf, 0.0));

  const double np = numlin::op_norm(a_pinv);
  r.norm_actual = numlin::op_norm(r.oracle_result);
  r.norm_bound = guarded_ratio(np, 1.0 - np * r.norm_E);
  r.diff_actual = numlin::op_norm(r.oracle_result - a_pinv);
  r.diff_bound = kDiffConstant * r.norm_actual * np * r.norm_E;

  if (stable.gi_matrix) {
    finish(r, 1.0 + np);
  } else {
    r.formula_vs_oracle_relerr = kInf;
    r.hypotheses_met = std::all_of(r.hypotheses.begin(), r.hypotheses.end(),
                                   [](const HypothesisStatus& h) { return h.satisfied; });
    r.bounds_hold = within_bound(r.norm_actual, r.norm_bound, 1.0 + np) &&
                    within_bound(r.diff_actual, r.diff_bound, 1.0 + np);
    r.all_satisfied = false;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Gap propagation

GapPropagationReport gap_propagation(const OuterInverseProblem& problem, const Subspace& t_prime,
                                     const ToleranceProfile& tol) {
  const Matrix g = compute(problem, tol).G;
  const double ag = numlin::op_norm(problem.A) * numlin::op_norm(g);

  GapPropagationReport r;
  r.gap_T = gap_hat(problem.T, t_prime);
  r.hypothesis = HypothesisStatus::check("lemma31_gap", thresholds::gap_lemma31(1.0, ag), r.gap_T);
  r.bound = guarded_ratio(ag * r.gap_T, 1.0 - (1.0 + ag) * r.gap_T);

  const Subspace at = image(problem.A, problem.T, tol);
  const Subspace at_prime = image(problem.A, t_prime, tol);
  r.actual = gap_hat(at, at_prime);
  // The one-sided estimate holds with the directed gap delta(T, T').
  r.directed_bound = ag * delta(problem.T, t_prime);
  r.directed_actual = delta(at, at_prime);
  r.bounds_hold = within_bound(r.actual, r.bound, 1.0) &&
                  within_bound(r.directed_actual, r.directed_bound, 1.0);
  return r;
}

// ---------------------------------------------------------------------------
// Representations

Matrix represent_T(const OuterInverseProblem& problem, const Matrix& g, const Subspace& t_prime,
                   const ToleranceProfile& tol) {
  const Index n = problem.A.cols();
  const Matrix ps = perp_projector(problem.S);
  const Matrix ptp = projector(t_prime);
  const Matrix resolvent = Matrix::Identity(n, n) + g * ps * problem.A * (ptp - projector(problem.T));
  return ptp * numlin::solve_square(resolvent, g * ps, tol);
}

Matrix represent_S(const OuterInverseProblem& problem, const Matrix& g, const Subspace& s_prime,
                   const ToleranceProfile& tol) {
  const Index n = problem.A.cols();
  const Matrix pt = projector(problem.T);
  const Matrix psp = perp_projector(s_prime);
  const Matrix resolvent =
      Matrix::Identity(n, n) + g * (psp - perp_projector(problem.S)) * problem.A * pt;
  return pt * numlin::solve_square(resolvent, g * psp, tol);
}

Matrix represent_TS(const OuterInverseProblem& problem, const Matrix& g, const Subspace& t_prime,
                    const Subspace& s_prime, const ToleranceProfile& tol) {
  const Index n = problem.A.cols();
  const Matrix& a = problem.A;
  const Matrix ps = perp_projector(problem.S);
  const Matrix psp = perp_projector(s_prime);
  const Matrix pt = projector(problem.T);
  const Matrix ptp = projector(t_prime);
  const Matrix id = Matrix::Identity(n, n);

  // K = (I + G P_{S^perp} A (P_{T'} - P_T))^-1 applied to both right-hand sides.
  const Matrix inner_resolvent = id + g * ps * a * (ptp - pt);
  const Matrix k_correction = numlin::solve_square(inner_resolvent, g * (ps * psp - ps) * a * ptp, tol);
  const Matrix k_tail = numlin::solve_square(inner_resolvent, g * ps * psp, tol);

  const Matrix outer_resolvent = id + ptp * k_correction;
  return ptp * numlin::solve_square(outer_resolvent, ptp * k_tail, tol);
}

Matrix represent_A(const Matrix& g, const Matrix& e, const ToleranceProfile& tol) {
  const Index n = g.rows();
  return numlin::solve_square(Matrix::Identity(n, n) + g * e, g, tol);
}

Matrix represent_A_right(const Matrix& g, const Matrix& e, const ToleranceProfile& tol) {
  const Index m = g.cols();
  const Matrix res = Matrix::Identity(m, m) + e * g;
  return numlin::solve_square(res.adjoint(), g.adjoint(), tol).adjoint();
}

// ---------------------------------------------------------------------------
// Bound reports

BoundReport perturb_T(const OuterInverseProblem& problem, const Subspace& t_prime,
                      const ToleranceProfile& tol) {
  const Matrix g_mat = compute(problem, tol).G;
  const double a = numlin::op_norm(problem.A), g = numlin::op_norm(g_mat);

  BoundReport r;
  r.theorem = Theorem::prop31;
  r.gap_T = gap_hat(problem.T, t_prime);
  r.hypotheses = {HypothesisStatus::check("prop31_gap", thresholds::gap_prop31(a, g), r.gap_T)};
  r.formula_result = represent_T(problem, g_mat, t_prime, tol);
  r.oracle_result = oracle_compute({problem.A, t_prime, problem.S}, tol);

  r.norm_actual = numlin::op_norm(r.oracle_result);
  r.norm_bound = guarded_ratio(g, 1.0 - g * a * r.gap_T);
  r.diff_actual = numlin::op_norm(r.oracle_result - g_mat);
  r.diff_bound = kDiffConstant * r.norm_actual * g * a * r.gap_T;
  finish(r, 1.0 + g);
  return r;
}

BoundReport perturb_S(const OuterInverseProblem& problem, const Subspace& s_prime,
                      const ToleranceProfile& tol) {
  const Matrix g_mat = compute(problem, tol).G;
  const double a = numlin::op_norm(problem.A), g = numlin::op_norm(g_mat);

  BoundReport r;
  r.theorem = Theorem::prop32;
  r.gap_S = gap_hat(problem.S, s_prime);
  r.hypotheses = {HypothesisStatus::check("prop32_gap", thresholds::gap_prop32(a, g), r.gap_S)};
  r.formula_result = represent_S(problem, g_mat, s_prime, tol);
  r.oracle_result = oracle_compute({problem.A, problem.T, s_prime}, tol);

  r.norm_actual = numlin::op_norm(r.oracle_result);
  r.norm_bound = guarded_ratio(g, 1.0 - g * a * r.gap_S);
  r.diff_actual = numlin::op_norm(r.oracle_result - g_mat);
  r.diff_bound = kDiffConstant * r.norm_actual * g * a * r.gap_S;
  finish(r, 1.0 + g);
  return r;
}

BoundReport perturb_TS(const OuterInverseProblem& problem, const Subspace& t_prime,
                       const Subspace& s_prime, const ToleranceProfile& tol) {
  const Matrix g_mat = compute(problem, tol).G;
  const double a = numlin::op_norm(problem.A), g = numlin::op_norm(g_mat);

  BoundReport r;
  r.theorem = Theorem::thm31;
  r.gap_T = gap_hat(problem.T, t_prime);
  r.gap_S = gap_hat(problem.S, s_prime);
  r.hypotheses = {HypothesisStatus::check("thm31_gap", thresholds::gap_thm31(a, g),
                                          std::max(r.gap_T, r.gap_S))};
  r.formula_result = represent_TS(problem, g_mat, t_prime, s_prime, tol);
  r.oracle_result = oracle_compute({problem.A, t_prime, s_prime}, tol);

  const double spread = g * a * (r.gap_T + r.gap_S);
  r.norm_actual = numlin::op_norm(r.oracle_result);
  r.norm_bound = guarded_ratio(g, 1.0 - spread);
  r.diff_actual = numlin::op_norm(r.oracle_result - g_mat);
  r.diff_bound = guarded_ratio(kDiffConstant * g * spread, 1.0 - spread);
  finish(r, 1.0 + g);
  return r;
}

BoundReport perturb_A(const OuterInverseProblem& problem, const Matrix& e,
                      const ToleranceProfile& tol) {
  if (e.rows() != problem.A.rows() || e.cols() != problem.A.cols())
    throw std::invalid_argument("perturb_A: E must have the shape of A");
  const Matrix g_mat = compute(problem, tol).G;
  const double g = numlin::op_norm(g_mat);

  BoundReport r;
  r.theorem = Theorem::lemma32;
  r.norm_E = numlin::op_norm(e);
  r.hypotheses = {HypothesisStatus::check("lemma32_norm", 1.0, g * r.norm_E)};
  r.formula_result = represent_A(g_mat, e, tol);
  const Matrix right = represent_A_right(g_mat, e, tol);
  r.oracle_result = oracle_compute({problem.A + e, problem.T, problem.S}, tol);

  const double ge = g * r.norm_E;
  r.norm_actual = numlin::op_norm(r.oracle_result);
  r.norm_bound = guarded_ratio(g, 1.0 - ge);
  r.diff_actual = numlin::op_norm(r.oracle_result - g_mat);
  r.diff_bound = guarded_ratio(g * ge, 1.0 - ge);
  r.consistency_ok = numlin::op_norm(r.formula_result - right) <= tol.verify_atol * (1.0 + g);
  finish(r, 1.0 + g);
  return r;
}

BoundReport perturb_all(const PerturbationScenario& sc, const ToleranceProfile& tol) {
  const OuterInverseProblem& problem = sc.base;
  const Matrix g_mat = compute(problem, tol).G;
  const double a = numlin::op_norm(problem.A), g = numlin::op_norm(g_mat);

  BoundReport r;
  r.theorem = Theorem::thm32;
  r.gap_T = sc.gap_T;
  r.gap_S = sc.gap_S;
  r.norm_E = sc.norm_E;
  r.hypotheses = {
      HypothesisStatus::check("thm32_gap", thresholds::gap_thm31(a, g), std::max(r.gap_T, r.gap_S)),
      HypothesisStatus::check("thm32_norm", 1.0 / (1.0 + g * a), g * r.norm_E)};

  const Matrix g_prime = represent_TS(problem, g_mat, sc.T_prime, sc.S_prime, tol);
  r.formula_result = represent_A(g_prime, sc.E, tol);
  const Matrix right = represent_A_right(g_prime, sc.E, tol);
  r.oracle_result = oracle_compute({problem.A + sc.E, sc.T_prime, sc.S_prime}, tol);

  const double gaps = r.gap_T + r.gap_S;
  const double denom = 1.0 - g * (r.norm_E + a * gaps);
  r.norm_actual = numlin::op_norm(r.oracle_result);
  r.norm_bound = guarded_ratio(g, denom);
  r.diff_actual = numlin::op_norm(r.oracle_result - g_mat);
  r.diff_bound = guarded_ratio(g * g * (r.norm_E + kDiffConstant * a * gaps), denom);
  r.consistency_ok = numlin::op_norm(r.formula_result - right) <= tol.verify_atol * (1.0 + g);
  finish(r, 1.0 + g);
  return r;
}

}  // namespace oil
