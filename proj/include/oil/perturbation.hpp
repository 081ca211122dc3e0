#pragma once

// Perturbed outer inverses: stable perturbation of A^+, gap propagation through
// A, and closed-form representations of A_{T',S'}^{(2)} and its A + E variant
// together with their norm and difference bounds.

#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "oil/hypothesis.hpp"
#include "oil/outer_inverse.hpp"

namespace oil {

enum class Theorem { lemma21, lemma31, prop31, prop32, thm31, lemma32, thm32 };

inline constexpr Theorem kAllTheorems[] = {Theorem::lemma21, Theorem::lemma31, Theorem::prop31,
                                           Theorem::prop32,  Theorem::thm31,   Theorem::lemma32,
                                           Theorem::thm32};

std::string_view to_string(Theorem t);
std::optional<Theorem> theorem_from_string(std::string_view name);

/// Golden-ratio constant of the difference bounds.
inline constexpr double kDiffConstant = std::numbers::phi;

/// Slack allowed on `actual <= bound`: relative guard plus a roundoff floor
/// proportional to the scale of the quantities being compared.
inline constexpr double kBoundRelSlack = 1e-10;
inline constexpr double kBoundAbsFloor = 1e-12;

struct PerturbationScenario {
  OuterInverseProblem base;
  Subspace T_prime;
  Subspace S_prime;
  Matrix E;
  double gap_T = 0.0;   // gap_hat(T, T')
  double gap_S = 0.0;   // gap_hat(S, S')
  double norm_E = 0.0;  // ||E||

  /// Measured quantities are always recomputed from the parts.
  static PerturbationScenario make(OuterInverseProblem base, Subspace t_prime, Subspace s_prime,
                                   Matrix e);
};

struct BoundReport {
  Theorem theorem = Theorem::prop31;
  Matrix formula_result;
  Matrix oracle_result;
  double formula_vs_oracle_relerr = 0.0;
  double norm_bound = 0.0;
  double norm_actual = 0.0;
  double diff_bound = 0.0;
  double diff_actual = 0.0;
  double gap_T = 0.0;
  double gap_S = 0.0;
  double norm_E = 0.0;
  std::vector<HypothesisStatus> hypotheses;
  bool hypotheses_met = false;
  bool bounds_hold = false;  // evaluated always, meaningful only under hypotheses
  /// Internal cross-checks: left/right resolvent forms agree, or for the
  /// stable-perturbation report the three equivalent conditions coincide.
  bool consistency_ok = true;
  bool all_satisfied = false;

  double margin_norm() const { return norm_bound - norm_actual; }
  double margin_diff() const { return diff_bound - diff_actual; }
};

struct StableReport {
  HypothesisStatus hypothesis;  // ||A^+|| ||dA|| < 1
  bool cond1 = false;  // R(Abar) ∩ R(A)^perp = {0}
  bool cond2 = false;  // N(Abar)^perp ∩ N(A) = {0}
  bool cond3_formula_valid = false;
  std::optional<Matrix> gi_matrix;  // A^+ (I + dA A^+)^-1 when it is a {1,2}-inverse of Abar

  bool conditions_agree() const { return cond1 == cond2 && cond2 == cond3_formula_valid; }
};

struct GapPropagationReport {
  double bound = 0.0;   // bound on gap_hat(AT, AT')
  double actual = 0.0;
  double directed_bound = 0.0;  // ||A|| ||G|| delta(T, T')
  double directed_actual = 0.0; // delta(AT, AT')
  double gap_T = 0.0;
  HypothesisStatus hypothesis;
  bool bounds_hold = false;
};

/// Premise thresholds in terms of a = ||A|| and g = ||A_{T,S}^{(2)}||.
namespace thresholds {
inline double gap_lemma31(double a, double g) { return 1.0 / (1.0 + a * g); }
inline double gap_prop31(double a, double g) { return 1.0 / ((1.0 + a * g) * (1.0 + a * g)); }
inline double gap_prop32(double a, double g) { return 1.0 / (2.0 + a * g); }
inline double gap_thm31(double a, double g) { return gap_prop31(a, g); }
inline double norm_lemma32(double g) { return 1.0 / g; }
inline double norm_thm32(double a, double g) { return 1.0 / (g * (1.0 + a * g)); }
}  // namespace thresholds

StableReport is_stable(const Matrix& a, const Matrix& da, const ToleranceProfile& tol = {});
BoundReport stable_bounds(const Matrix& a, const Matrix& da, const ToleranceProfile& tol = {});

GapPropagationReport gap_propagation(const OuterInverseProblem& problem, const Subspace& t_prime,
                                     const ToleranceProfile& tol = {});

BoundReport perturb_T(const OuterInverseProblem& problem, const Subspace& t_prime,
                      const ToleranceProfile& tol = {});
BoundReport perturb_S(const OuterInverseProblem& problem, const Subspace& s_prime,
                      const ToleranceProfile& tol = {});
BoundReport perturb_TS(const OuterInverseProblem& problem, const Subspace& t_prime,
                       const Subspace& s_prime, const ToleranceProfile& tol = {});
BoundReport perturb_A(const OuterInverseProblem& problem, const Matrix& e,
                      const ToleranceProfile& tol = {});
BoundReport perturb_all(const PerturbationScenario& scenario, const ToleranceProfile& tol = {});

// Representations on their own, for callers that already hold G = A_{T,S}^{(2)}.
Matrix represent_T(const OuterInverseProblem& problem, const Matrix& g, const Subspace& t_prime,
                   const ToleranceProfile& tol = {});
Matrix represent_S(const OuterInverseProblem& problem, const Matrix& g, const Subspace& s_prime,
                   const ToleranceProfile& tol = {});
Matrix represent_TS(const OuterInverseProblem& problem, const Matrix& g, const Subspace& t_prime,
                    const Subspace& s_prime, const ToleranceProfile& tol = {});
/// Left form (I + G E)^-1 G.
Matrix represent_A(const Matrix& g, const Matrix& e, const ToleranceProfile& tol = {});
/// Right form G (I + E G)^-1.
Matrix represent_A_right(const Matrix& g, const Matrix& e, const ToleranceProfile& tol = {});

bool within_bound(double actual, double bound, double scale);

}  // namespace oil
