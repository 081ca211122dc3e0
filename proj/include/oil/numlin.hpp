#pragma once

// Dense complex kernels. Every rank, pseudoinverse, norm and projector in the
// library is derived from the SVD computed here.

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace oil {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical thresholds shared by every operation.
struct ToleranceProfile {
  /// Relative singular-value cutoff. Unset means max(rows, cols) * eps of the
  /// matrix being ranked.
  std::optional<double> rank_rtol;
  double verify_atol = 1e-8;
  double cond_cap = 1e12;

  double rank_ratio(Index rows, Index cols) const;
  /// Throws std::invalid_argument on non-positive values or rank_rtol >= 1.
  void validate() const;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SvdError : public NumericError {
 public:
  SvdError(Index rows, Index cols);
  Index rows;
  Index cols;
};

class IllConditioned : public NumericError {
 public:
  IllConditioned(std::string_view what, double cond);
  double condition_number;
};

struct SvdFactors {
  Matrix left_vectors;       // m x m unitary
  RealVector singular_values;  // nonincreasing, length min(m, n)
  Matrix right_vectors;      // n x n unitary
};

struct PenroseResiduals {
  double aba;    // ||ABA - A||
  double bab;    // ||BAB - B||
  double ab_h;   // ||(AB)* - AB||
  double ba_h;   // ||(BA)* - BA||
  double max() const;
};

namespace numlin {

bool all_finite(const Matrix& a);
/// Throws std::invalid_argument naming `what` when `a` holds NaN or Inf.
void require_finite(const Matrix& a, std::string_view what);

Matrix identity(Index n);

SvdFactors svd(const Matrix& a);
RealVector singular_values(const Matrix& a);

/// Largest singular value; 0 for empty matrices.
double op_norm(const Matrix& a);

/// Number of singular values above rank_ratio * sigma_max.
Index rank(const Matrix& a, const ToleranceProfile& tol = {});
Index rank_of(const SvdFactors& f, Index rows, Index cols, const ToleranceProfile& tol);

Matrix pinv(const Matrix& a, const ToleranceProfile& tol = {});

/// sigma_max / sigma_min of a square matrix (inf when singular).
double condition_number(const Matrix& m);

/// Solves M X = rhs. Refuses when cond(M) exceeds tol.cond_cap and verifies
/// ||M X - rhs|| <= verify_atol * (1 + ||rhs||).
Matrix solve_square(const Matrix& m, const Matrix& rhs, const ToleranceProfile& tol = {});

/// Residuals of the four Penrose equations for the candidate B = A^+.
PenroseResiduals penrose_residuals(const Matrix& a, const Matrix& b);

/// ||x - y|| / max(||y||, tiny); operator norm.
double relative_error(const Matrix& x, const Matrix& y);

}  // namespace numlin
}  // namespace oil
