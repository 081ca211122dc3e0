#include "oil/outer_inverse.hpp"

#include <cmath>
#include <sstream>

namespace oil {

OuterInverseProblem::OuterInverseProblem(Matrix a, Subspace t, Subspace s)
    : A(std::move(a)), T(std::move(t)), S(std::move(s)) {
  numlin::require_finite(A, "A");
  if (T.ambient_dim() != A.cols())
    throw std::invalid_argument("T must live in C^n where n = cols(A)");
  if (S.ambient_dim() != A.rows())
    throw std::invalid_argument("S must live in C^m where m = rows(A)");
}

namespace {

const char* failure_message(ExistenceFailure which) {
  switch (which) {
    case ExistenceFailure::kernel_intersection:
      return "kernel intersection nontrivial: N(A) meets T";
    case ExistenceFailure::direct_sum:
      return "AT and S do not form a direct sum equal to the whole space";
  }
  return "outer inverse does not exist";
}

}  // namespace

ExistenceError::ExistenceError(ExistenceFailure w)
    : std::runtime_error(failure_message(w)), which(w) {}

std::string_view to_string(ClassicalKind kind) {
  switch (kind) {
    case ClassicalKind::moore_penrose: return "moore_penrose";
    case ClassicalKind::group: return "group";
    case ClassicalKind::drazin: return "drazin";
    case ClassicalKind::bott_duffin: return "bott_duffin";
  }
  return "?";
}

ExistenceCertificate existence(const OuterInverseProblem& problem, const ToleranceProfile& tol) {
  ExistenceCertificate cert;
  const Subspace null_a = kernel_of(problem.A, tol);
  cert.kernel_meets_T_trivially = intersection_trivial(null_a, problem.T, tol);
  const Subspace at = image(problem.A, problem.T, tol);
  cert.AT_dim = at.dim();
  cert.direct_sum_holds = direct_sum_is_whole(at, problem.S, tol);
  cert.exists = cert.kernel_meets_T_trivially && cert.direct_sum_holds;
  return cert;
}

namespace {

void require_existence(const OuterInverseProblem& problem, const ToleranceProfile& tol) {
  const ExistenceCertificate cert = existence(problem, tol);
  if (!cert.kernel_meets_T_trivially) throw ExistenceError(ExistenceFailure::kernel_intersection);
  if (!cert.direct_sum_holds) throw ExistenceError(ExistenceFailure::direct_sum);
}

}  // namespace

OuterInverseResult defining_residuals(const OuterInverseProblem& problem, Matrix g,
                                      const ToleranceProfile& tol) {
  OuterInverseResult out;
  out.residual_gag = numlin::op_norm(g * problem.A * g - g);
  out.range_gap = gap_hat(range_of(g, tol), problem.T);
  out.null_gap = gap_hat(kernel_of(g, tol), problem.S);
  out.G = std::move(g);
  return out;
}

OuterInverseResult compute(const OuterInverseProblem& problem, const ToleranceProfile& tol) {
  require_existence(problem, tol);
  const Matrix s_perp = projector(orthogonal_complement(problem.S));
  const Matrix p_t = projector(problem.T);
  OuterInverseResult out = defining_residuals(problem, numlin::pinv(s_perp * problem.A * p_t, tol), tol);

  const double g_norm = numlin::op_norm(out.G);
  if (!(out.residual_gag <= tol.verify_atol * (1.0 + g_norm)) ||
      !(out.range_gap <= tol.verify_atol) || !(out.null_gap <= tol.verify_atol)) {
    std::ostringstream os;
    os << "outer inverse misses its defining equations: ||GAG-G||=" << out.residual_gag
       << " gap(R(G),T)=" << out.range_gap << " gap(N(G),S)=" << out.null_gap;
    throw NumericError(os.str());
  }
  return out;
}

Matrix oracle_compute(const OuterInverseProblem& problem, const ToleranceProfile& tol) {
  require_existence(problem, tol);
  const Matrix& u = problem.T.basis();
  const Matrix w = orthogonal_complement(problem.S).basis();
  // dim T = dim S^perp under existence, so W* A U is square.
  const Matrix middle = w.adjoint() * problem.A * u;
  return u * numlin::solve_square(middle, w.adjoint(), tol);
}

Matrix mp_via_12_inverse(const Matrix& a, const Matrix& z, const ToleranceProfile& tol) {
  if (z.rows() != a.cols() || z.cols() != a.rows())
    throw std::invalid_argument("mp_via_12_inverse: Z must have the shape of A*");
  const double na = numlin::op_norm(a), nz = numlin::op_norm(z);
  const double r1 = numlin::op_norm(a * z * a - a);
  const double r2 = numlin::op_norm(z * a * z - z);
  const bool ok1 = r1 <= tol.verify_atol * (1.0 + na) * (1.0 + na) * (1.0 + nz);
  const bool ok2 = r2 <= tol.verify_atol * (1.0 + nz) * (1.0 + nz) * (1.0 + na);
  if (!ok1 || !ok2) {
    std::ostringstream os;
    os << "Z is not a {1,2}-inverse of A: ||AZA-A||=" << r1 << " ||ZAZ-Z||=" << r2;
    throw std::invalid_argument(os.str());
  }
  const Matrix corange = projector(orthogonal_complement(kernel_of(a, tol)));
  const Matrix range = projector(range_of(a, tol));
  return corange * z * range;
}

namespace {

// Rank of A^k measured against ||A||^k rather than ||A^k||: for a nilpotent
// part, A^k decays to roundoff and must count as zero, not as noise of full rank.
struct PowerFactor {
  SvdFactors svd;
  Index rank = 0;
};

PowerFactor power_factor(const Matrix& power, double scale, const ToleranceProfile& tol) {
  PowerFactor f{numlin::svd(power), 0};
  const double cutoff = tol.rank_ratio(power.rows(), power.cols()) * scale;
  const RealVector& s = f.svd.singular_values;
  while (f.rank < s.size() && s(f.rank) > cutoff) ++f.rank;
  return f;
}

}  // namespace

Index drazin_index(const Matrix& a, const ToleranceProfile& tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("drazin_index: A must be square");
  const Index n = a.rows();
  const double na = numlin::op_norm(a);
  Matrix power = Matrix::Identity(n, n);
  double scale = 1.0;
  Index prev = n;
  for (Index k = 0; k <= n; ++k) {
    power = power * a;
    scale *= na;
    const Index r = power_factor(power, scale, tol).rank;
    if (r == prev) return k;
    prev = r;
  }
  return n;
}

OuterInverseProblem classical_problem(const Matrix& a, ClassicalKind kind,
                                      const ToleranceProfile& tol,
                                      const std::optional<Subspace>& constraint) {
  const bool square = a.rows() == a.cols();
  switch (kind) {
    case ClassicalKind::moore_penrose:
      return {a, orthogonal_complement(kernel_of(a, tol)), orthogonal_complement(range_of(a, tol))};
    case ClassicalKind::group: {
      if (!square) throw std::invalid_argument("group inverse needs a square matrix");
      if (numlin::rank(a * a, tol) != numlin::rank(a, tol))
        throw std::invalid_argument("group inverse needs rank(A^2) = rank(A)");
      return {a, range_of(a, tol), kernel_of(a, tol)};
    }
    case ClassicalKind::drazin: {
      if (!square) throw std::invalid_argument("Drazin inverse needs a square matrix");
      const Index k = drazin_index(a, tol);
      const Index n = a.rows();
      Matrix ak = Matrix::Identity(n, n);
      for (Index i = 0; i < k; ++i) ak = ak * a;
      const PowerFactor f = power_factor(ak, std::pow(numlin::op_norm(a), static_cast<double>(k)), tol);
      return {a, Subspace::from_orthonormal(f.svd.left_vectors.leftCols(f.rank)),
              Subspace::from_orthonormal(f.svd.right_vectors.rightCols(n - f.rank))};
    }
    case ClassicalKind::bott_duffin: {
      if (!square) throw std::invalid_argument("Bott-Duffin inverse needs a square matrix");
      if (!constraint) throw std::invalid_argument("Bott-Duffin inverse needs a constraint subspace L");
      OuterInverseProblem p{a, *constraint, orthogonal_complement(*constraint)};
      if (!existence(p, tol).exists)
        throw std::invalid_argument("Bott-Duffin inverse needs N(A) ∩ L = {0} and AL ∔ L^perp = C^n");
      return p;
    }
  }
  throw std::invalid_argument("unknown classical inverse");
}

OuterInverseResult classical_cases(const Matrix& a, ClassicalKind kind, const ToleranceProfile& tol,
                                   const std::optional<Subspace>& constraint) {
  return compute(classical_problem(a, kind, tol, constraint), tol);
}

}  // namespace oil
