#include <doctest.h>

#include "oil/instance_gen.hpp"
#include "support.hpp"

using namespace oil;
using namespace testing;

namespace {

OuterInverseProblem random_feasible(Index m, Index n, Rng& rng) {
  for (;;) {
    const Index r = rng.uniform_int(1, std::min(m, n));
    const Index t = rng.uniform_int(1, std::min({r, m - 1, n}));
    OuterInverseProblem p{random_matrix_with_rank(m, n, r, rng), random_subspace(n, t, rng),
                          random_subspace(m, m - t, rng)};
    if (existence(p).exists) return p;
  }
}

}  // namespace

TEST_CASE("problem shapes are validated") {
  CHECK_THROWS_AS((OuterInverseProblem{Matrix::Identity(2, 3), line({1, 0}), line({0, 1})}),
                  std::invalid_argument);
}

TEST_CASE("existence certificate") {
  const ExistenceCertificate ok = existence({Matrix::Identity(2, 2), line({1, 0}), line({0, 1})});
  CHECK(ok.exists);
  CHECK(ok.AT_dim == 1);

  const ExistenceCertificate kern = existence({diag({1, 0}), line({0, 1}), line({1, 0})});
  CHECK_FALSE(kern.kernel_meets_T_trivially);
  CHECK_FALSE(kern.exists);

  const ExistenceCertificate sum = existence({diag({1, 1}), line({1, 0}), line({1, 0})});
  CHECK(sum.kernel_meets_T_trivially);
  CHECK_FALSE(sum.direct_sum_holds);
  CHECK_FALSE(sum.exists);
}

TEST_CASE("compute examples") {
  const OuterInverseResult id = compute({Matrix::Identity(2, 2), line({1, 0}), line({0, 1})});
  CHECK(dist(id.G, diag({1, 0})) < 1e-15);

  const OuterInverseResult d = compute({diag({2, 3}), line({1, 0}), line({0, 1})});
  CHECK(dist(d.G, diag({0.5, 0})) < 1e-15);
  CHECK(d.residual_gag < 1e-15);
}

TEST_CASE("compute names the failed existence condition") {
  try {
    compute({diag({1, 0}), line({0, 1}), line({1, 0})});
    FAIL("expected ExistenceError");
  } catch (const ExistenceError& e) {
    CHECK(e.which == ExistenceFailure::kernel_intersection);
    CHECK(std::string(e.what()).find("kernel intersection nontrivial") != std::string::npos);
  }
  try {
    compute({diag({1, 1}), line({1, 0}), line({1, 0})});
    FAIL("expected ExistenceError");
  } catch (const ExistenceError& e) {
    CHECK(e.which == ExistenceFailure::direct_sum);
  }
}

TEST_CASE("prescribed range and kernel of the Moore-Penrose pair give pinv") {
  Rng rng(21);
  for (int k = 0; k < 30; ++k) {
    const Index m = rng.uniform_int(1, 9), n = rng.uniform_int(1, 9);
    const Matrix a = random_matrix_with_rank(m, n, rng.uniform_int(1, std::min(m, n)), rng);
    const OuterInverseProblem p{a, orthogonal_complement(kernel_of(a)), orthogonal_complement(range_of(a))};
    CHECK(dist(compute(p).G, numlin::pinv(a)) <= 1e-8 * (1 + numlin::op_norm(numlin::pinv(a))));
  }
}

TEST_CASE("oracle route agrees with the projected pseudoinverse") {
  CHECK(dist(oracle_compute({Matrix::Identity(2, 2), line({1, 0}), line({0, 1})}), diag({1, 0})) < 1e-15);

  Rng rng(8);
  for (int k = 0; k < 30; ++k) {
    const OuterInverseProblem p = random_feasible(6, 5, rng);
    CHECK(numlin::relative_error(compute(p).G, oracle_compute(p)) <= 1e-8);
  }
}

TEST_CASE("the outer inverse is unique") {
  // With R(G) in T and S in N(G), GAG = G becomes G A U = U, so the defining
  // equations are linear in G: G W_S = 0, (I - P_T) G = 0, G A U = U.
  // Stack them over the 9 entries of G and solve from scratch.
  Rng rng(12);
  const OuterInverseProblem p = random_feasible(3, 3, rng);
  const Matrix& u = p.T.basis();
  const Matrix& ws = p.S.basis();
  const Matrix q = Matrix::Identity(3, 3) - projector(p.T);
  auto constraints = [&](const Matrix& g) {
    const Matrix c1 = g * ws, c2 = q * g, c3 = g * p.A * u;
    Matrix out(c1.size() + c2.size() + c3.size(), 1);
    out << c1.reshaped(), c2.reshaped(), c3.reshaped();
    return out;
  };
  const Index rows = constraints(Matrix::Zero(3, 3)).rows();
  Matrix sys(rows, 9);
  for (Index e = 0; e < 9; ++e) {
    Matrix unit = Matrix::Zero(3, 3);
    unit(e % 3, e / 3) = 1.0;
    sys.col(e) = constraints(unit);
  }
  Matrix rhs = Matrix::Zero(rows, 1);
  rhs.bottomRows(u.size()) = u.reshaped();

  CHECK(numlin::rank(sys) == 9);  // trivial null space: at most one solution
  const Matrix g = (numlin::pinv(sys) * rhs).reshaped(3, 3);
  CHECK(numlin::op_norm(sys * g.reshaped(9, 1) - rhs) < 1e-12);
  CHECK(numlin::relative_error(g, oracle_compute(p)) < 1e-10);
}

TEST_CASE("Moore-Penrose inverse from a {1,2}-inverse") {
  const Matrix a = diag({1, 0});
  CHECK(dist(mp_via_12_inverse(a, numlin::pinv(a)), numlin::pinv(a)) < 1e-15);
  CHECK(dist(mp_via_12_inverse(a, mat({{1, 7}, {0, 0}})), diag({1, 0})) < 1e-14);
  CHECK_THROWS_AS(mp_via_12_inverse(a, Matrix::Identity(2, 2)), std::invalid_argument);

  Rng rng(31);
  for (int k = 0; k < 30; ++k) {
    const Index m = rng.uniform_int(2, 8), n = rng.uniform_int(2, 8);
    const Index r = rng.uniform_int(1, std::min(m, n));
    const Matrix b = random_matrix_with_rank(m, n, r, rng);
    // An oblique {1,2}-inverse: outer inverse with a random complement of N(B)
    // as range and a random complement of R(B) as kernel.
    const OuterInverseProblem p{b, random_subspace(n, r, rng), random_subspace(m, m - r, rng)};
    if (!existence(p).exists) continue;
    const Matrix z = compute(p).G;
    CHECK(numlin::relative_error(mp_via_12_inverse(b, z), numlin::pinv(b)) <= 1e-8);
  }
}

TEST_CASE("classical inverses") {
  CHECK(dist(classical_cases(diag({2, 0}), ClassicalKind::moore_penrose).G, diag({0.5, 0})) < 1e-15);

  const Matrix a3 = diag({3, 0});
  const Matrix g = classical_cases(a3, ClassicalKind::group).G;
  CHECK(dist(g, diag({1.0 / 3, 0})) < 1e-15);
  CHECK(dist(a3 * g, g * a3) < 1e-15);

  const Matrix nil = mat({{0, 1}, {0, 0}});
  CHECK(drazin_index(nil) == 2);
  const OuterInverseResult dz = classical_cases(nil, ClassicalKind::drazin);
  CHECK(numlin::op_norm(dz.G) == 0.0);

  CHECK_THROWS_AS(classical_cases(nil, ClassicalKind::group), std::invalid_argument);
}

TEST_CASE("Drazin inverse of a matrix with a nilpotent block") {
  // A = diag(2, J) with J a 2x2 Jordan block at 0; A^D = diag(1/2, 0, 0).
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 2;
  a(1, 2) = 1;
  Rng rng(6);
  Matrix s = Matrix::Identity(3, 3) + 0.3 * random_gaussian(3, 3, rng);
  const Matrix sa = s * a * s.inverse();
  const Matrix expected = s * diag({0.5, 0, 0}) * s.inverse();
  const Matrix ad = classical_cases(sa, ClassicalKind::drazin).G;
  CHECK(drazin_index(sa) == 2);
  CHECK(numlin::relative_error(ad, expected) < 1e-10);
  CHECK(dist(sa * ad, ad * sa) < 1e-10);
}

TEST_CASE("Bott-Duffin inverse matches P_L (A P_L + P_Lperp)^-1") {
  Rng rng(15);
  for (int k = 0; k < 20; ++k) {
    const Index n = rng.uniform_int(2, 7);
    const Matrix a = random_gaussian(n, n, rng);
    const Subspace l = random_subspace(n, rng.uniform_int(1, n - 1), rng);
    const Matrix pl = projector(l);
    const Matrix expected = pl * (a * pl + Matrix::Identity(n, n) - pl).inverse();
    const Matrix g = classical_cases(a, ClassicalKind::bott_duffin, {}, l).G;
    CHECK(numlin::relative_error(g, expected) < 1e-8);
  }
  CHECK_THROWS_AS(classical_cases(Matrix::Identity(2, 2), ClassicalKind::bott_duffin),
                  std::invalid_argument);
}
