#include "oil/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace oil {

Subspace Subspace::from_spanning_set(const Matrix& vectors, const ToleranceProfile& tol) {
  const SvdFactors f = numlin::svd(vectors);
  const Index r = numlin::rank_of(f, vectors.rows(), vectors.cols(), tol);
  return Subspace(f.left_vectors.leftCols(r));
}

Subspace Subspace::from_orthonormal(Matrix basis, double atol) {
  numlin::require_finite(basis, "subspace basis");
  const Index k = basis.cols();
  const double resid = numlin::op_norm(basis.adjoint() * basis - Matrix::Identity(k, k));
  if (!(resid <= atol)) {
    std::ostringstream os;
    os << "basis is not orthonormal (Gram residual " << resid << ")";
    throw std::invalid_argument(os.str());
  }
  return Subspace(std::move(basis));
}

Subspace Subspace::trivial(Index ambient_dim) { return Subspace(Matrix::Zero(ambient_dim, 0)); }

Subspace Subspace::whole(Index ambient_dim) {
  return Subspace(Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace range_of(const Matrix& a, const ToleranceProfile& tol) {
  return Subspace::from_spanning_set(a, tol);
}

Subspace kernel_of(const Matrix& a, const ToleranceProfile& tol) {
  const SvdFactors f = numlin::svd(a);
  const Index r = numlin::rank_of(f, a.rows(), a.cols(), tol);
  return Subspace::from_orthonormal(f.right_vectors.rightCols(a.cols() - r), 1.0);
}

Subspace image(const Matrix& a, const Subspace& v, const ToleranceProfile& tol) {
  if (a.cols() != v.ambient_dim()) throw std::invalid_argument("image: dimension mismatch");
  const Matrix mapped = a * v.basis();
  const SvdFactors f = numlin::svd(mapped);
  const double scale = numlin::op_norm(a);
  Index r = 0;
  if (scale > 0.0) {
    const double cutoff = tol.rank_ratio(mapped.rows(), mapped.cols()) * scale;
    while (r < f.singular_values.size() && f.singular_values(r) > cutoff) ++r;
  }
  return Subspace::from_orthonormal(f.left_vectors.leftCols(r), 1.0);
}

Matrix projector(const Subspace& v) { return v.basis() * v.basis().adjoint(); }

double dist(const Vector& x, const Subspace& n) {
  if (x.size() != n.ambient_dim()) throw std::invalid_argument("dist: dimension mismatch");
  const Vector residual = x - n.basis() * (n.basis().adjoint() * x);
  return residual.norm();
}

namespace {

void require_same_ambient(const Subspace& m, const Subspace& n, const char* op) {
  if (m.ambient_dim() != n.ambient_dim())
    throw std::invalid_argument(std::string(op) + ": subspaces live in different spaces");
}

}  // namespace

double delta(const Subspace& m, const Subspace& n) {
  require_same_ambient(m, n, "delta");
  if (m.dim() == 0) return 0.0;
  // ||(I - P_N) P_M|| = ||(I - P_N) U_M|| since U_M is an isometry.
  const Matrix away = m.basis() - n.basis() * (n.basis().adjoint() * m.basis());
  return numlin::op_norm(away);
}

double gap_hat(const Subspace& m, const Subspace& n) {
  require_same_ambient(m, n, "gap_hat");
  return numlin::op_norm(projector(m) - projector(n));
}

Subspace orthogonal_complement(const Subspace& v) {
  const Index n = v.ambient_dim(), k = v.dim();
  if (k == 0) return Subspace::whole(n);
  // Left singular vectors past the first k span the complement of an
  // orthonormal k-frame.
  const SvdFactors f = numlin::svd(v.basis());
  return Subspace::from_orthonormal(f.left_vectors.rightCols(n - k), 1.0);
}

bool intersection_trivial(const Subspace& m, const Subspace& n, const ToleranceProfile& tol) {
  require_same_ambient(m, n, "intersection_trivial");
  const Index total = m.dim() + n.dim();
  if (total == 0) return true;
  if (total > m.ambient_dim()) return false;
  Matrix joined(m.ambient_dim(), total);
  joined << m.basis(), n.basis();
  return numlin::rank(joined, tol) == total;
}

bool direct_sum_is_whole(const Subspace& m, const Subspace& n, const ToleranceProfile& tol) {
  return m.dim() + n.dim() == m.ambient_dim() && intersection_trivial(m, n, tol);
}

ObliqueProjector oblique_projector(const Subspace& range, const Subspace& nullsp,
                                   const ToleranceProfile& tol) {
  require_same_ambient(range, nullsp, "oblique_projector");
  if (!direct_sum_is_whole(range, nullsp, tol))
    throw std::invalid_argument("oblique_projector: range and null space are not complementary");
  const Matrix& u = range.basis();
  const Matrix w = orthogonal_complement(nullsp).basis();
  // P = U (W*U)^-1 W*
  const Matrix middle = w.adjoint() * u;
  Matrix p = u * numlin::solve_square(middle, w.adjoint(), tol);
  return {std::move(p), range, nullsp};
}

ComplementednessResult complementedness_check(const ObliqueProjector& p, const Subspace& m_prime,
                                              const ToleranceProfile& tol) {
  const Index n = p.matrix.rows();
  if (m_prime.ambient_dim() != n)
    throw std::invalid_argument("complementedness_check: dimension mismatch");
  const Subspace along = range_of(Matrix::Identity(n, n) - p.matrix, tol);
  ComplementednessResult out;
  out.complemented = direct_sum_is_whole(along, m_prime, tol);
  out.hypothesis = HypothesisStatus::check("complement_gap", 1.0 / (1.0 + numlin::op_norm(p.matrix)),
                                           gap_hat(p.range_space, m_prime));
  return out;
}

}  // namespace oil
