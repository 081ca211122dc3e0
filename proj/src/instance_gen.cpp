#include "oil/instance_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace oil {

Index Rng::uniform_int(Index lo, Index hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<Index>(engine_() % span);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  return base ^ splitmix64((stream << 32) ^ index);
}

void GenConfig::validate() const {
  auto fraction = [](double v, const char* name) {
    if (!(v >= 0.0 && v < 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1)");
  };
  fraction(target_gap_T, "target_gap_T");
  fraction(target_gap_S, "target_gap_S");
  fraction(target_norm_E_ratio, "target_norm_E_ratio");
  if (max_dim < 2) throw std::invalid_argument("max_dim must be at least 2");
  if (m < 0 || n < 0 || rank_A < 0 || dim_T < 0) throw std::invalid_argument("dimensions must be >= 0");
  if (m && n && rank_A > std::min(m, n)) throw std::invalid_argument("rank_A exceeds min(m, n)");
  if (rank_A && dim_T > rank_A) throw std::invalid_argument("dim_T exceeds rank_A");
  if (max_retries < 1) throw std::invalid_argument("max_retries must be positive");
  if (!(max_conditioning >= 1.0)) throw std::invalid_argument("max_conditioning must be >= 1");
}

namespace {

std::string describe_failures(const std::map<std::string, int>& counts) {
  std::ostringstream os;
  os << "instance generation exhausted its retries:";
  for (const auto& [name, count] : counts) os << ' ' << name << '=' << count;
  return os.str();
}

}  // namespace

GenerationError::GenerationError(std::map<std::string, int> counts)
    : std::runtime_error(describe_failures(counts)), failure_counts(std::move(counts)) {}

Matrix random_gaussian(Index rows, Index cols, Rng& rng) {
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) out(i, j) = rng.complex_normal();
  return out;
}

Matrix random_orthonormal(Index n, Index k, Rng& rng) {
  if (k < 0 || k > n) throw std::invalid_argument("random_orthonormal: need 0 <= k <= n");
  if (k == 0) return Matrix::Zero(n, 0);
  const Matrix gauss = random_gaussian(n, k, rng);
  Eigen::HouseholderQR<Matrix> qr(gauss);
  return qr.householderQ() * Matrix::Identity(n, k);
}

Matrix random_matrix_with_rank(Index m, Index n, Index r, Rng& rng) {
  if (r < 0 || r > std::min(m, n)) throw std::invalid_argument("rank must lie in [0, min(m, n)]");
  const Matrix u = random_orthonormal(m, r, rng);
  const Matrix v = random_orthonormal(n, r, rng);
  RealVector sigma(r);
  for (Index i = 0; i < r; ++i) sigma(i) = rng.uniform(0.5, 2.0);
  return u * sigma.cast<Complex>().asDiagonal() * v.adjoint();
}

Subspace random_subspace(Index ambient, Index dim, Rng& rng) {
  return Subspace::from_orthonormal(random_orthonormal(ambient, dim, rng));
}

Subspace perturb_subspace_exact_gap(const Subspace& v, double theta, Rng& rng) {
  if (v.dim() == 0 || v.dim() == v.ambient_dim())
    throw std::invalid_argument("perturb_subspace_exact_gap: subspace is trivial or full");
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0))
    throw std::invalid_argument("perturb_subspace_exact_gap: theta must lie in [0, pi/2]");

  const Matrix& basis = v.basis();
  // Random unit direction orthogonal to V.
  Vector w = random_gaussian(v.ambient_dim(), 1, rng).col(0);
  w -= basis * (basis.adjoint() * w);
  w -= basis * (basis.adjoint() * w);
  w.normalize();

  Matrix rotated = basis;
  rotated.col(0) = std::cos(theta) * basis.col(0) + std::sin(theta) * w;
  return Subspace::from_orthonormal(std::move(rotated));
}

Matrix rank_preserving_perturbation(const Matrix& a, double target, Rng& rng) {
  const Index m = a.rows(), n = a.cols();
  Matrix x = random_gaussian(m, m, rng);
  Matrix y = random_gaussian(n, n, rng);
  x /= numlin::op_norm(x);
  y /= numlin::op_norm(y);
  if (target == 0.0) return Matrix::Zero(m, n);

  auto diff = [&](double s) -> Matrix {
    return (Matrix::Identity(m, m) + s * x) * a * (Matrix::Identity(n, n) + s * y) - a;
  };
  double hi = target;
  for (int i = 0; i < 80 && numlin::op_norm(diff(hi)) < target; ++i) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-17 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (numlin::op_norm(diff(mid)) < target ? lo : hi) = mid;
  }
  return diff(hi);
}

PerturbedParts perturbed_parts(Theorem t) {
  switch (t) {
    case Theorem::lemma21: return {false, false, true};
    case Theorem::lemma31: return {true, false, false};
    case Theorem::prop31: return {true, false, false};
    case Theorem::prop32: return {false, true, false};
    case Theorem::thm31: return {true, true, false};
    case Theorem::lemma32: return {false, false, true};
    case Theorem::thm32: return {true, true, true};
  }
  return {};
}

std::vector<HypothesisStatus> hypotheses_for(Theorem t, const PerturbationScenario& sc,
                                             const ToleranceProfile& tol) {
  const Matrix& a_mat = sc.base.A;
  if (t == Theorem::lemma21) {
    const StableReport st = is_stable(a_mat, sc.E, tol);
    return {st.hypothesis, HypothesisStatus::check("lemma21_stable", 0.5, st.cond1 ? 0.0 : 1.0)};
  }
  const double a = numlin::op_norm(a_mat);
  const double g = numlin::op_norm(compute(sc.base, tol).G);
  const double gaps = std::max(sc.gap_T, sc.gap_S);
  switch (t) {
    case Theorem::lemma31:
      return {HypothesisStatus::check("lemma31_gap", thresholds::gap_lemma31(a, g), sc.gap_T)};
    case Theorem::prop31:
      return {HypothesisStatus::check("prop31_gap", thresholds::gap_prop31(a, g), sc.gap_T)};
    case Theorem::prop32:
      return {HypothesisStatus::check("prop32_gap", thresholds::gap_prop32(a, g), sc.gap_S)};
    case Theorem::thm31:
      return {HypothesisStatus::check("thm31_gap", thresholds::gap_thm31(a, g), gaps)};
    case Theorem::lemma32:
      return {HypothesisStatus::check("lemma32_norm", 1.0, g * sc.norm_E)};
    case Theorem::thm32:
      return {HypothesisStatus::check("thm32_gap", thresholds::gap_thm31(a, g), gaps),
              HypothesisStatus::check("thm32_norm", 1.0 / (1.0 + g * a), g * sc.norm_E)};
    case Theorem::lemma21: break;
  }
  return {};
}

namespace {

struct Dims {
  Index m, n, rank, dim_t;
};

Dims draw_dims(const GenConfig& c, Rng& rng) {
  Dims d{};
  d.m = c.m ? c.m : rng.uniform_int(2, c.max_dim);
  d.n = c.n ? c.n : rng.uniform_int(2, c.max_dim);
  d.rank = c.rank_A ? c.rank_A : rng.uniform_int(1, std::min(d.m, d.n));
  d.dim_t = c.dim_T ? c.dim_T : rng.uniform_int(1, std::max<Index>(1, std::min({d.rank, d.n - 1, d.m - 1})));
  return d;
}

double gap_threshold(Theorem t, double a, double g) {
  switch (t) {
    case Theorem::lemma31: return thresholds::gap_lemma31(a, g);
    case Theorem::prop31: return thresholds::gap_prop31(a, g);
    case Theorem::prop32: return thresholds::gap_prop32(a, g);
    case Theorem::thm31:
    case Theorem::thm32: return thresholds::gap_thm31(a, g);
    default: return 0.0;
  }
}

}  // namespace

GeneratedInstance generate(const GenConfig& config, Theorem theorem, const ToleranceProfile& tol) {
  config.validate();
  Rng rng(config.seed);
  const PerturbedParts parts = perturbed_parts(theorem);
  std::map<std::string, int> failures;

  for (int attempt = 1; attempt <= config.max_retries; ++attempt) {
    const Dims d = draw_dims(config, rng);
    const Matrix a_mat = random_matrix_with_rank(d.m, d.n, d.rank, rng);
    Subspace t = random_subspace(d.n, d.dim_t, rng);
    Subspace s = random_subspace(d.m, d.m - d.dim_t, rng);
    OuterInverseProblem base{a_mat, t, s};

    if (!existence(base, tol).exists) {
      ++failures["existence"];
      continue;
    }
    Matrix g_mat;
    try {
      g_mat = compute(base, tol).G;
    } catch (const NumericError&) {
      // Existence holds only marginally; G is too large to resolve.
      ++failures["conditioning"];
      continue;
    }
    const double a = numlin::op_norm(a_mat), g = numlin::op_norm(g_mat);
    if (a * g > config.max_conditioning) {
      ++failures["conditioning"];
      continue;
    }
    if ((parts.T && (d.dim_t == 0 || d.dim_t == d.n)) ||
        (parts.S && (s.dim() == 0 || s.dim() == d.m))) {
      ++failures["no_room_to_rotate"];
      continue;
    }

    GeneratedInstance inst{.theorem = theorem,
                           .scenario = PerturbationScenario::make(base, t, s, Matrix::Zero(d.m, d.n)),
                           .hypothesis_statuses = {}};
    const double gap_thr = gap_threshold(theorem, a, g);
    Subspace t_prime = t, s_prime = s;
    if (parts.T) {
      inst.target_gap_T = config.target_gap_T * gap_thr;
      t_prime = perturb_subspace_exact_gap(t, std::asin(inst.target_gap_T), rng);
    }
    if (parts.S) {
      inst.target_gap_S = config.target_gap_S * gap_thr;
      s_prime = perturb_subspace_exact_gap(s, std::asin(inst.target_gap_S), rng);
    }
    Matrix e = Matrix::Zero(d.m, d.n);
    if (parts.E) {
      if (theorem == Theorem::lemma21) {
        const double pinv_norm = numlin::op_norm(numlin::pinv(a_mat, tol));
        inst.target_norm_E = config.target_norm_E_ratio / pinv_norm;
        e = rank_preserving_perturbation(a_mat, inst.target_norm_E, rng);
      } else {
        const double thr = theorem == Theorem::lemma32 ? thresholds::norm_lemma32(g)
                                                       : thresholds::norm_thm32(a, g);
        inst.target_norm_E = config.target_norm_E_ratio * thr;
        Matrix dir = random_gaussian(d.m, d.n, rng);
        dir /= numlin::op_norm(dir);
        e = inst.target_norm_E * dir;
      }
    }

    inst.scenario = PerturbationScenario::make(std::move(base), std::move(t_prime),
                                               std::move(s_prime), std::move(e));
    inst.achieved_gap_T = inst.scenario.gap_T;
    inst.achieved_gap_S = inst.scenario.gap_S;
    inst.achieved_norm_E = inst.scenario.norm_E;
    inst.hypothesis_statuses = hypotheses_for(theorem, inst.scenario, tol);
    inst.attempts = attempt;

    const bool clear = std::all_of(inst.hypothesis_statuses.begin(), inst.hypothesis_statuses.end(),
                                   [](const HypothesisStatus& h) { return h.clear_of_band(); });
    if (!clear) {
      ++failures["hypothesis"];
      continue;
    }
    return inst;
  }
  throw GenerationError(std::move(failures));
}

}  // namespace oil
