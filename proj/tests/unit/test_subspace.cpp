#include <doctest.h>

#include "oil/instance_gen.hpp"
#include "support.hpp"

using namespace oil;
using namespace testing;

namespace {
const double kPi6 = std::numbers::pi / 6;
}

TEST_CASE("from_spanning_set") {
  const Subspace e1 = span(mat({{1, 2}, {0, 0}}));
  CHECK(e1.dim() == 1);
  CHECK(dist(projector(e1), diag({1, 0})) < 1e-15);

  CHECK(span(Matrix::Zero(3, 2)).dim() == 0);

  Rng rng(5);
  const Subspace v = span(random_gaussian(5, 3, rng));
  CHECK(v.dim() == 3);
  CHECK(dist(v.basis().adjoint() * v.basis(), Matrix::Identity(3, 3)) < 1e-13);
}

TEST_CASE("from_orthonormal rejects non-orthonormal columns") {
  CHECK_NOTHROW(Subspace::from_orthonormal(Matrix::Identity(3, 2)));
  CHECK_THROWS_AS(Subspace::from_orthonormal(2.0 * Matrix::Identity(3, 2)), std::invalid_argument);
}

TEST_CASE("projector examples") {
  CHECK(dist(projector(line({1, 0})), diag({1, 0})) < 1e-15);
  CHECK(dist(projector(Subspace::whole(3)), Matrix::Identity(3, 3)) < 1e-15);
  CHECK(dist(projector(line({1, 1})), mat({{0.5, 0.5}, {0.5, 0.5}})) < 1e-15);
  CHECK(dist(projector(Subspace::trivial(2)), Matrix::Zero(2, 2)) == 0.0);
}

TEST_CASE("dist examples") {
  CHECK(dist(Vector(col({1, 0})), line({1, 0})) < 1e-15);
  CHECK(dist(Vector(col({1, 0})), line({0, 1})) == doctest::Approx(1.0));
  CHECK(dist(Vector(col({1, 1})), line({1, 0})) == doctest::Approx(1.0));
}

TEST_CASE("directed gap") {
  const Subspace m = line({1, 0});
  CHECK(delta(Subspace::trivial(2), m) == 0.0);
  CHECK(delta(m, m) < 1e-15);
  CHECK(delta(line({std::cos(kPi6), std::sin(kPi6)}), m) == doctest::Approx(0.5));
  // A smaller space inside a larger one has zero directed gap one way only.
  CHECK(delta(m, Subspace::whole(2)) < 1e-15);
  CHECK(delta(Subspace::whole(2), m) == doctest::Approx(1.0));
}

TEST_CASE("symmetric gap") {
  const Subspace m = line({1, 0});
  CHECK(gap_hat(m, m) < 1e-15);
  CHECK(gap_hat(m, line({0, 1})) == doctest::Approx(1.0));
  CHECK(gap_hat(m, line({std::cos(kPi6), std::sin(kPi6)})) == doctest::Approx(0.5));
  CHECK_THROWS_AS(gap_hat(m, Subspace::whole(3)), std::invalid_argument);
}

TEST_CASE("symmetric gap equals the larger directed gap") {
  Rng rng(17);
  for (int k = 0; k < 100; ++k) {
    const Index n = rng.uniform_int(1, 8);
    const Subspace a = random_subspace(n, rng.uniform_int(0, n), rng);
    const Subspace b = random_subspace(n, rng.uniform_int(0, n), rng);
    CHECK(std::abs(gap_hat(a, b) - std::max(delta(a, b), delta(b, a))) <= 1e-10);
  }
}

TEST_CASE("orthogonal complement") {
  CHECK(dist(projector(orthogonal_complement(line({1, 0}))), diag({0, 1})) < 1e-15);
  CHECK(orthogonal_complement(Subspace::trivial(3)).dim() == 3);
  CHECK(orthogonal_complement(Subspace::whole(3)).dim() == 0);

  Rng rng(2);
  const Subspace v = random_subspace(5, 2, rng);
  const Subspace c = orthogonal_complement(v);
  CHECK(c.dim() == 3);
  CHECK(numlin::op_norm(v.basis().adjoint() * c.basis()) < 1e-13);
}

TEST_CASE("range, kernel and image") {
  const Matrix a = mat({{1, 2}, {2, 4}, {0, 0}});
  CHECK(range_of(a).dim() == 1);
  CHECK(kernel_of(a).dim() == 1);
  CHECK(numlin::op_norm(a * kernel_of(a).basis()) < 1e-14);
  CHECK(image(diag({1, 0}), line({0, 1})).dim() == 0);
  CHECK(gap_hat(image(diag({1, 0}), line({1, 1})), line({1, 0})) < 1e-15);
}

TEST_CASE("intersection and direct sums") {
  const Subspace e1 = line({1, 0}), e2 = line({0, 1});
  CHECK(intersection_trivial(e1, e2));
  CHECK_FALSE(intersection_trivial(e1, e1));
  Rng rng(9);
  CHECK(intersection_trivial(random_subspace(5, 2, rng), random_subspace(5, 2, rng)));

  CHECK(direct_sum_is_whole(e1, e2));
  CHECK(direct_sum_is_whole(e1, line({1, 1})));
  CHECK_FALSE(direct_sum_is_whole(e1, e1));
  CHECK_FALSE(direct_sum_is_whole(line({1, 0, 0}), line({0, 1, 0})));
}

TEST_CASE("oblique projector") {
  const ObliqueProjector p = oblique_projector(line({1, 0}), line({0, 1}));
  CHECK(dist(p.matrix, diag({1, 0})) < 1e-15);

  const ObliqueProjector q = oblique_projector(line({1, 0}), line({1, 1}));
  CHECK(dist(q.matrix, mat({{1, -1}, {0, 0}})) < 1e-14);

  CHECK_THROWS(oblique_projector(line({1, 0}), line({1, 0})));

  Rng rng(4);
  for (int k = 0; k < 30; ++k) {
    const Index n = rng.uniform_int(2, 9), r = rng.uniform_int(1, n - 1);
    const Subspace range = random_subspace(n, r, rng), nullsp = random_subspace(n, n - r, rng);
    const Matrix pm = oblique_projector(range, nullsp).matrix;
    const double np = numlin::op_norm(pm);
    CHECK(dist(pm * pm, pm) <= 1e-8 * (1 + np));
    CHECK(numlin::op_norm(pm * range.basis() - range.basis()) <= 1e-8 * (1 + np));
    CHECK(numlin::op_norm(pm * nullsp.basis()) <= 1e-8 * (1 + np));
  }
}

TEST_CASE("complementedness check") {
  const Subspace m = line({1, 0, 0});
  const ObliqueProjector p = oblique_projector(m, span(mat({{1, 0}, {1, 1}, {0, 1}})));
  const ComplementednessResult same = complementedness_check(p, m);
  CHECK(same.complemented);
  CHECK(same.hypothesis.satisfied);

  // Large projector norm and a gap of 0.9: the premise is flagged unmet.
  const ObliqueProjector steep = oblique_projector(line({1, 0}), line({1, 1e-3}));
  Rng rng(1);
  const Subspace far = perturb_subspace_exact_gap(line({1, 0}), std::asin(0.9), rng);
  const ComplementednessResult flagged = complementedness_check(steep, far);
  CHECK_FALSE(flagged.hypothesis.satisfied);
  CHECK(flagged.hypothesis.observed == doctest::Approx(0.9));

  for (int k = 0; k < 200; ++k) {
    const Index n = rng.uniform_int(2, 8), r = rng.uniform_int(1, n - 1);
    const Subspace range = random_subspace(n, r, rng);
    const ObliqueProjector q = oblique_projector(range, random_subspace(n, n - r, rng));
    const double thr = 1.0 / (1.0 + numlin::op_norm(q.matrix));
    const Subspace moved = perturb_subspace_exact_gap(range, std::asin(rng.uniform(0, 0.99) * thr), rng);
    const ComplementednessResult res = complementedness_check(q, moved);
    REQUIRE(res.hypothesis.satisfied);
    CHECK(res.complemented);
  }
}
