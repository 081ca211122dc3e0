#pragma once

#include "oil/hypothesis.hpp"
#include "oil/numlin.hpp"

namespace oil {

/// Subspace of C^n held as an orthonormal basis (n x dim, dim may be 0).
class Subspace {
 public:
  /// Orthonormalized column span of `vectors`; dim equals rank(vectors).
  static Subspace from_spanning_set(const Matrix& vectors, const ToleranceProfile& tol = {});
  /// Wraps a basis that is already orthonormal; throws if basis*basis != I.
  static Subspace from_orthonormal(Matrix basis, double atol = 1e-8);
  static Subspace trivial(Index ambient_dim);
  static Subspace whole(Index ambient_dim);

  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

 private:
  explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}
  Matrix basis_;
};

/// Idempotent with prescribed range and kernel.
struct ObliqueProjector {
  Matrix matrix;
  Subspace range_space;
  Subspace null_space;
};

struct ComplementednessResult {
  bool complemented = false;
  /// gap_hat(R(P), M') < 1 / (1 + ||P||)
  HypothesisStatus hypothesis;
};

// Subspaces attached to an operator. Ranks follow the shared SVD truncation.
Subspace range_of(const Matrix& a, const ToleranceProfile& tol = {});
Subspace kernel_of(const Matrix& a, const ToleranceProfile& tol = {});
/// A V, with rank cut relative to ||A|| rather than to the image itself so that
/// V inside N(A) yields the zero subspace.
Subspace image(const Matrix& a, const Subspace& v, const ToleranceProfile& tol = {});

Matrix projector(const Subspace& v);
double dist(const Vector& x, const Subspace& n);
/// Directed gap ||(I - P_N) P_M||; 0 when M = {0}.
double delta(const Subspace& m, const Subspace& n);
/// Symmetric gap ||P_M - P_N||.
double gap_hat(const Subspace& m, const Subspace& n);
Subspace orthogonal_complement(const Subspace& v);
bool intersection_trivial(const Subspace& m, const Subspace& n, const ToleranceProfile& tol = {});
bool direct_sum_is_whole(const Subspace& m, const Subspace& n, const ToleranceProfile& tol = {});

/// U (W* U)^-1 W* with U = basis(range), W = basis(nullsp^perp).
ObliqueProjector oblique_projector(const Subspace& range, const Subspace& nullsp,
                                   const ToleranceProfile& tol = {});

ComplementednessResult complementedness_check(const ObliqueProjector& p, const Subspace& m_prime,
                                              const ToleranceProfile& tol = {});

}  // namespace oil
