#pragma once

#include <optional>
#include <string_view>

#include "oil/numlin.hpp"
#include "oil/subspace.hpp"

namespace oil {

/// A in C^{m x n} with T in C^n (prescribed range) and S in C^m (prescribed kernel).
struct OuterInverseProblem {
  Matrix A;
  Subspace T;
  Subspace S;

  OuterInverseProblem(Matrix a, Subspace t, Subspace s);
};

struct ExistenceCertificate {
  bool kernel_meets_T_trivially = false;  // N(A) ∩ T = {0}
  Index AT_dim = 0;
  bool direct_sum_holds = false;          // AT ∔ S = C^m
  bool exists = false;
};

/// G together with the residuals of GAG = G, R(G) = T, N(G) = S.
struct OuterInverseResult {
  Matrix G;
  double residual_gag = 0.0;
  double range_gap = 0.0;
  double null_gap = 0.0;
};

enum class ExistenceFailure { kernel_intersection, direct_sum };

class ExistenceError : public std::runtime_error {
 public:
  explicit ExistenceError(ExistenceFailure which);
  ExistenceFailure which;
};

enum class ClassicalKind { moore_penrose, group, drazin, bott_duffin };

std::string_view to_string(ClassicalKind kind);

ExistenceCertificate existence(const OuterInverseProblem& problem, const ToleranceProfile& tol = {});

/// G = (P_{S^perp} A P_T)^+. Throws ExistenceError when the inverse does not
/// exist and NumericError when the result misses its defining equations.
OuterInverseResult compute(const OuterInverseProblem& problem, const ToleranceProfile& tol = {});

/// Independent route G = U (W* A U)^-1 W* with U = basis(T), W = basis(S^perp).
Matrix oracle_compute(const OuterInverseProblem& problem, const ToleranceProfile& tol = {});

/// Fills the residual fields for a candidate G of `problem`.
OuterInverseResult defining_residuals(const OuterInverseProblem& problem, Matrix g,
                                      const ToleranceProfile& tol = {});

/// A^+ = P_{N(A)^perp} Z P_{R(A)} for a {1,2}-inverse Z of A.
Matrix mp_via_12_inverse(const Matrix& a, const Matrix& z, const ToleranceProfile& tol = {});

/// Smallest k <= n with rank(A^{k+1}) = rank(A^k).
Index drazin_index(const Matrix& a, const ToleranceProfile& tol = {});

/// The (T, S) pair that turns a classical generalized inverse into A_{T,S}^{(2)}.
OuterInverseProblem classical_problem(const Matrix& a, ClassicalKind kind,
                                      const ToleranceProfile& tol = {},
                                      const std::optional<Subspace>& constraint = std::nullopt);

OuterInverseResult classical_cases(const Matrix& a, ClassicalKind kind,
                                   const ToleranceProfile& tol = {},
                                   const std::optional<Subspace>& constraint = std::nullopt);

}  // namespace oil
