#include "oil/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace oil {

double ToleranceProfile::rank_ratio(Index rows, Index cols) const {
  if (rank_rtol) return *rank_rtol;
  return static_cast<double>(std::max<Index>({rows, cols, 1})) *
         std::numeric_limits<double>::epsilon();
}

void ToleranceProfile::validate() const {
  if (rank_rtol && !(*rank_rtol > 0.0 && *rank_rtol < 1.0))
    throw std::invalid_argument("rank_rtol must lie in (0, 1)");
  if (!(verify_atol > 0.0)) throw std::invalid_argument("verify_atol must be positive");
  if (!(cond_cap > 0.0)) throw std::invalid_argument("cond_cap must be positive");
}

namespace {

std::string svd_message(Index rows, Index cols) {
  std::ostringstream os;
  os << "SVD did not converge for a " << rows << "x" << cols << " matrix";
  return os.str();
}

std::string cond_message(std::string_view what, double cond) {
  std::ostringstream os;
  os << what << " (estimated condition number " << cond << ")";
  return os.str();
}

}  // namespace

SvdError::SvdError(Index r, Index c) : NumericError(svd_message(r, c)), rows(r), cols(c) {}

IllConditioned::IllConditioned(std::string_view what, double cond)
    : NumericError(cond_message(what, cond)), condition_number(cond) {}

double PenroseResiduals::max() const { return std::max({aba, bab, ab_h, ba_h}); }

namespace numlin {

bool all_finite(const Matrix& a) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
  return true;
}

void require_finite(const Matrix& a, std::string_view what) {
  if (!all_finite(a)) throw std::invalid_argument(std::string(what) + " has non-finite entries");
}

Matrix identity(Index n) { return Matrix::Identity(n, n); }

SvdFactors svd(const Matrix& a) {
  require_finite(a, "svd input");
  const Index m = a.rows(), n = a.cols();
  if (m == 0 || n == 0)
    return {Matrix::Identity(m, m), RealVector::Zero(0), Matrix::Identity(n, n)};

  Eigen::JacobiSVD<Matrix> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (solver.info() != Eigen::Success) throw SvdError(m, n);
  SvdFactors f{solver.matrixU(), solver.singularValues(), solver.matrixV()};
  if (!f.singular_values.allFinite() || !all_finite(f.left_vectors) ||
      !all_finite(f.right_vectors))
    throw SvdError(m, n);
  return f;
}

RealVector singular_values(const Matrix& a) {
  require_finite(a, "svd input");
  if (a.rows() == 0 || a.cols() == 0) return RealVector::Zero(0);
  Eigen::JacobiSVD<Matrix> solver(a);
  if (solver.info() != Eigen::Success) throw SvdError(a.rows(), a.cols());
  return solver.singularValues();
}

double op_norm(const Matrix& a) {
  const RealVector s = singular_values(a);
  return s.size() == 0 ? 0.0 : s(0);
}

Index rank_of(const SvdFactors& f, Index rows, Index cols, const ToleranceProfile& tol) {
  const RealVector& s = f.singular_values;
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cutoff = tol.rank_ratio(rows, cols) * s(0);
  Index r = 0;
  while (r < s.size() && s(r) > cutoff) ++r;
  return r;
}

Index rank(const Matrix& a, const ToleranceProfile& tol) {
  const RealVector s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cutoff = tol.rank_ratio(a.rows(), a.cols()) * s(0);
  return (s.array() > cutoff).count();
}

Matrix pinv(const Matrix& a, const ToleranceProfile& tol) {
  const SvdFactors f = svd(a);
  const Index r = rank_of(f, a.rows(), a.cols(), tol);
  const RealVector inv = f.singular_values.head(r).cwiseInverse();
  return f.right_vectors.leftCols(r) * inv.asDiagonal() * f.left_vectors.leftCols(r).adjoint();
}

double condition_number(const Matrix& m) {
  const RealVector s = singular_values(m);
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

Matrix solve_square(const Matrix& m, const Matrix& rhs, const ToleranceProfile& tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("solve_square: matrix is not square");
  if (rhs.rows() != m.rows()) throw std::invalid_argument("solve_square: rhs row mismatch");
  require_finite(m, "solve_square matrix");
  require_finite(rhs, "solve_square rhs");
  if (m.rows() == 0) return Matrix::Zero(0, rhs.cols());

  const double cond = condition_number(m);
  if (!(cond <= tol.cond_cap)) throw IllConditioned("singular or ill-conditioned system", cond);

  Matrix x = m.partialPivLu().solve(rhs);
  const double resid = op_norm(m * x - rhs);
  if (!(resid <= tol.verify_atol * (1.0 + op_norm(rhs))))
    throw IllConditioned("linear solve residual above tolerance", cond);
  return x;
}

PenroseResiduals penrose_residuals(const Matrix& a, const Matrix& b) {
  const Matrix ab = a * b;
  const Matrix ba = b * a;
  return {op_norm(ab * a - a), op_norm(ba * b - b), op_norm(ab.adjoint() - ab),
          op_norm(ba.adjoint() - ba)};
}

double relative_error(const Matrix& x, const Matrix& y) {
  const double denom = std::max(op_norm(y), std::numeric_limits<double>::min());
  return op_norm(x - y) / denom;
}

}  // namespace numlin
}  // namespace oil
