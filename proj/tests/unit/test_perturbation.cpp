#include <doctest.h>

#include "oil/instance_gen.hpp"
#include "support.hpp"

using namespace oil;
using namespace testing;

namespace {

OuterInverseProblem diag23() { return {diag({2, 3}), line({1, 0}), line({0, 1})}; }

GeneratedInstance draw(Theorem t, std::uint64_t seed, double ratio = 0.5) {
  GenConfig c;
  c.seed = seed;
  c.target_gap_T = c.target_gap_S = c.target_norm_E_ratio = ratio;
  return generate(c, t);
}

void check_report(const BoundReport& r) {
  CHECK(r.hypotheses_met);
  CHECK(r.bounds_hold);
  CHECK(r.consistency_ok);
  CHECK(r.formula_vs_oracle_relerr <= 1e-8);
  CHECK(r.all_satisfied);
}

}  // namespace

TEST_CASE("theorem names round-trip") {
  for (Theorem t : kAllTheorems) CHECK(theorem_from_string(to_string(t)) == t);
  CHECK_FALSE(theorem_from_string("lemma99").has_value());
}

TEST_CASE("hypothesis status is strict") {
  CHECK_FALSE(HypothesisStatus::check("x", 0.5, 0.5).satisfied);
  CHECK(HypothesisStatus::check("x", 0.5, 0.4999).satisfied);
}

TEST_CASE("bound check tolerates only roundoff") {
  CHECK(within_bound(1.0, 1.0, 1.0));
  CHECK(within_bound(1.0 + 1e-12, 1.0, 1.0));
  CHECK_FALSE(within_bound(1.0 + 1e-6, 1.0, 1.0));
  CHECK(within_bound(1e-15, 0.0, 2.0));
  CHECK_FALSE(within_bound(1e-9, 0.0, 2.0));
  CHECK_FALSE(within_bound(std::nan(""), 1.0, 1.0));
}

TEST_CASE("scenario measures its own gaps") {
  const PerturbationScenario sc =
      PerturbationScenario::make(diag23(), line({1, 1}), line({0, 1}), diag({0.1, 0}));
  CHECK(sc.gap_T == doctest::Approx(std::sqrt(0.5)));
  CHECK(sc.gap_S < 1e-15);
  CHECK(sc.norm_E == doctest::Approx(0.1));
  CHECK_THROWS_AS(PerturbationScenario::make(diag23(), line({1, 0}), line({0, 1}), Matrix::Zero(3, 2)),
                  std::invalid_argument);
}

TEST_CASE("stable perturbation predicate") {
  const Matrix a = diag({1, 0});
  const StableReport zero = is_stable(a, Matrix::Zero(2, 2));
  CHECK(zero.cond1);
  CHECK(zero.cond2);
  CHECK(zero.cond3_formula_valid);
  REQUIRE(zero.gi_matrix);
  CHECK(dist(*zero.gi_matrix, numlin::pinv(a)) < 1e-15);

  const StableReport jump = is_stable(a, diag({0, 1e-3}));
  CHECK(jump.hypothesis.satisfied);
  CHECK_FALSE(jump.cond1);
  CHECK_FALSE(jump.cond2);
  CHECK_FALSE(jump.cond3_formula_valid);
  CHECK(jump.conditions_agree());

  Rng rng(41);
  for (int k = 0; k < 50; ++k) {
    const Index m = rng.uniform_int(2, 8), n = rng.uniform_int(2, 8);
    const Matrix b = random_matrix_with_rank(m, n, rng.uniform_int(1, std::min(m, n)), rng);
    const double np = numlin::op_norm(numlin::pinv(b));
    const Matrix db = rank_preserving_perturbation(b, rng.uniform(0.05, 0.9) / np, rng);
    const StableReport st = is_stable(b, db);
    REQUIRE(st.hypothesis.satisfied);
    CHECK(st.cond1);
    CHECK(st.cond2);
    CHECK(st.cond3_formula_valid);
  }
}

TEST_CASE("stable perturbation bounds") {
  const BoundReport zero = stable_bounds(diag({1, 0}), Matrix::Zero(2, 2));
  CHECK(zero.diff_actual == 0.0);
  CHECK(zero.diff_bound == 0.0);
  CHECK(zero.bounds_hold);

  const BoundReport id = stable_bounds(Matrix::Identity(2, 2), 0.1 * Matrix::Identity(2, 2));
  CHECK(id.norm_actual == doctest::Approx(1 / 1.1));
  CHECK(id.norm_bound == doctest::Approx(1 / 0.9));
  CHECK(dist(id.formula_result, Matrix::Identity(2, 2) / 1.1) < 1e-15);
  check_report(id);

  for (std::uint64_t s = 0; s < 100; ++s) check_report(stable_bounds(
      draw(Theorem::lemma21, s).scenario.base.A, draw(Theorem::lemma21, s).scenario.E));
}

TEST_CASE("gap propagation") {
  const OuterInverseProblem p = diag23();
  const GapPropagationReport same = gap_propagation(p, p.T);
  CHECK(same.actual < 1e-15);
  CHECK(same.bound == 0.0);
  CHECK(same.bounds_hold);

  // A = I: AT = T, so the actual gap is the input gap.
  const OuterInverseProblem id{Matrix::Identity(3, 3), line({1, 0, 0}), span(mat({{0, 0}, {1, 0}, {0, 1}}))};
  Rng rng(3);
  const Subspace moved = perturb_subspace_exact_gap(id.T, 0.2, rng);
  const GapPropagationReport r = gap_propagation(id, moved);
  CHECK(r.hypothesis.satisfied);
  CHECK(r.actual == doctest::Approx(std::sin(0.2)));
  CHECK(r.actual <= r.bound);
  CHECK(r.bounds_hold);

  for (std::uint64_t s = 0; s < 100; ++s) {
    const GeneratedInstance inst = draw(Theorem::lemma31, s);
    const GapPropagationReport g = gap_propagation(inst.scenario.base, inst.scenario.T_prime);
    CHECK(g.hypothesis.satisfied);
    CHECK(g.bounds_hold);
  }
}

TEST_CASE("perturbing T") {
  const OuterInverseProblem p = diag23();
  const BoundReport same = perturb_T(p, p.T);
  CHECK(dist(same.formula_result, compute(p).G) <= 1e-12);
  CHECK(same.diff_actual <= 1e-12);

  const double th = 0.05;
  const BoundReport r = perturb_T(p, line({std::cos(th), std::sin(th)}));
  check_report(r);
  // Closed form U (W*AU)^-1 W* with U = (cos, sin), W = e1.
  CHECK(dist(r.oracle_result, mat({{0.5, 0}, {0.5 * std::tan(th), 0}})) < 1e-14);

  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto inst = draw(Theorem::prop31, s);
    check_report(perturb_T(inst.scenario.base, inst.scenario.T_prime));
  }
}

TEST_CASE("perturbing S") {
  const OuterInverseProblem p = diag23();
  const BoundReport same = perturb_S(p, p.S);
  CHECK(dist(same.formula_result, compute(p).G) <= 1e-12);

  const double th = 0.05;
  const Subspace s_prime = line({std::sin(th), std::cos(th)});
  const BoundReport r = perturb_S(p, s_prime);
  check_report(r);
  CHECK(numlin::relative_error(r.formula_result, oracle_compute({p.A, p.T, s_prime})) <= 1e-8);

  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto inst = draw(Theorem::prop32, s);
    check_report(perturb_S(inst.scenario.base, inst.scenario.S_prime));
  }
}

TEST_CASE("perturbing T and S together") {
  const OuterInverseProblem p = diag23();
  CHECK(dist(perturb_TS(p, p.T, p.S).formula_result, compute(p).G) <= 1e-12);

  Rng rng(77);
  int checked = 0;
  while (checked < 5) {
    const OuterInverseProblem q{random_matrix_with_rank(5, 4, 3, rng), random_subspace(4, 2, rng),
                                random_subspace(5, 3, rng)};
    if (!existence(q).exists) continue;
    const BoundReport r = perturb_TS(q, perturb_subspace_exact_gap(q.T, 1e-3, rng),
                                     perturb_subspace_exact_gap(q.S, 1e-3, rng));
    CHECK(r.formula_vs_oracle_relerr <= 1e-8);
    ++checked;
  }

  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto inst = draw(Theorem::thm31, s);
    check_report(perturb_TS(inst.scenario.base, inst.scenario.T_prime, inst.scenario.S_prime));
  }
}

TEST_CASE("perturbing A") {
  const OuterInverseProblem p = diag23();
  CHECK(dist(perturb_A(p, Matrix::Zero(2, 2)).formula_result, compute(p).G) <= 1e-15);

  const BoundReport r = perturb_A(p, diag({0.1, 0}));
  check_report(r);
  CHECK(dist(r.formula_result, diag({1 / 2.1, 0})) < 1e-15);
  CHECK(dist(r.oracle_result, diag({1 / 2.1, 0})) < 1e-15);

  CHECK_THROWS_AS(perturb_A(p, Matrix::Zero(3, 2)), std::invalid_argument);

  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto inst = draw(Theorem::lemma32, s);
    check_report(perturb_A(inst.scenario.base, inst.scenario.E));
  }
}

TEST_CASE("perturbing everything") {
  const OuterInverseProblem p = diag23();
  const PerturbationScenario none = PerturbationScenario::make(p, p.T, p.S, Matrix::Zero(2, 2));
  CHECK(dist(perturb_all(none).formula_result, compute(p).G) <= 1e-12);

  Rng rng(13);
  int checked = 0;
  while (checked < 5) {
    const OuterInverseProblem q{random_matrix_with_rank(6, 5, 4, rng), random_subspace(5, 3, rng),
                                random_subspace(6, 3, rng)};
    if (!existence(q).exists) continue;
    const PerturbationScenario sc = PerturbationScenario::make(
        q, perturb_subspace_exact_gap(q.T, 1e-3, rng), perturb_subspace_exact_gap(q.S, 1e-3, rng),
        1e-3 * random_gaussian(6, 5, rng));
    CHECK(perturb_all(sc).formula_vs_oracle_relerr <= 1e-8);
    ++checked;
  }

  for (std::uint64_t s = 0; s < 100; ++s) check_report(perturb_all(draw(Theorem::thm32, s).scenario));
}

TEST_CASE("zero perturbations reproduce the base inverse") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto sc = draw(Theorem::thm32, s, 0.0).scenario;
    const Matrix g = compute(sc.base).G;
    CHECK(numlin::relative_error(perturb_T(sc.base, sc.T_prime).formula_result, g) <= 1e-12);
    CHECK(numlin::relative_error(perturb_S(sc.base, sc.S_prime).formula_result, g) <= 1e-12);
    CHECK(numlin::relative_error(perturb_TS(sc.base, sc.T_prime, sc.S_prime).formula_result, g) <= 1e-12);
    CHECK(numlin::relative_error(perturb_A(sc.base, sc.E).formula_result, g) <= 1e-12);
    CHECK(numlin::relative_error(perturb_all(sc).formula_result, g) <= 1e-12);
  }
}

TEST_CASE("differences vanish as the perturbation shrinks") {
  Rng rng(99);
  const OuterInverseProblem base = draw(Theorem::thm32, 5).scenario.base;
  const double g = numlin::op_norm(compute(base).G);
  Matrix dir = random_gaussian(base.A.rows(), base.A.cols(), rng);
  dir /= numlin::op_norm(dir) * g;
  std::vector<double> diffs;
  for (double t : {1e-3, 1e-5, 1e-7}) {
    Rng local(5);  // same rotation directions at every magnitude
    const PerturbationScenario sc = PerturbationScenario::make(
        base, perturb_subspace_exact_gap(base.T, t, local), perturb_subspace_exact_gap(base.S, t, local),
        t * dir);
    diffs.push_back(perturb_all(sc).diff_actual);
  }
  CHECK(diffs.front() > 0);
  CHECK(diffs[1] <= diffs[0] * 1e-2 * 1.5);
  CHECK(diffs.back() <= diffs.front() * 1e-2);
}

TEST_CASE("failed premises still evaluate but are not asserted") {
  // gap 0.9 is far beyond 1/(1+ag)^2 for this problem.
  const OuterInverseProblem p = diag23();
  const BoundReport r = perturb_T(p, line({std::sqrt(1 - 0.81), 0.9}));
  CHECK_FALSE(r.hypotheses_met);
  CHECK_FALSE(r.all_satisfied);
  CHECK(r.formula_vs_oracle_relerr <= 1e-8);
}
