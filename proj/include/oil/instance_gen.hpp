#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "oil/perturbation.hpp"

namespace oil {

/// Seeded generator with a fixed, documented output sequence. The engine is
/// std::mt19937_64 (its sequence is pinned by the standard); uniforms take the
/// top 53 bits and normals use Box-Muller, so no std:: distribution (whose
/// algorithms are implementation-defined) is involved.
class Rng {
 public:
  static constexpr std::string_view kIdentifier = "mt19937_64/u53/box-muller";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  Index uniform_int(Index lo, Index hi);
  double normal();
  /// Circular complex Gaussian with E|z|^2 = 1.
  Complex complex_normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);
/// Per-trial seed: base XOR a hash of (stream, index).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index);

struct GenConfig {
  std::uint64_t seed = 20240601;
  // Zero means "draw per instance": m, n in [2, max_dim], rank_A in
  // [1, min(m, n)], dim_T in [1, min(rank_A, n - 1, m - 1)].
  Index m = 0;
  Index n = 0;
  Index rank_A = 0;
  Index dim_T = 0;
  Index max_dim = 12;
  // Fractions of the premise threshold of the theorem under test.
  double target_gap_T = 0.5;
  double target_gap_S = 0.5;
  double target_norm_E_ratio = 0.5;
  int max_retries = 50;
  /// Draws with ||A|| ||A_{T,S}^{(2)}|| above this are rejected.
  double max_conditioning = 1e3;

  void validate() const;
};

struct GeneratedInstance {
  Theorem theorem = Theorem::prop31;
  PerturbationScenario scenario;
  double achieved_gap_T = 0.0;
  double achieved_gap_S = 0.0;
  double achieved_norm_E = 0.0;
  double target_gap_T = 0.0;
  double target_gap_S = 0.0;
  double target_norm_E = 0.0;
  std::vector<HypothesisStatus> hypothesis_statuses;
  int attempts = 0;
};

class GenerationError : public std::runtime_error {
 public:
  explicit GenerationError(std::map<std::string, int> failure_counts);
  std::map<std::string, int> failure_counts;
};

Matrix random_gaussian(Index rows, Index cols, Rng& rng);
/// n x k matrix with orthonormal columns from QR of a complex Gaussian.
Matrix random_orthonormal(Index n, Index k, Rng& rng);
/// U diag(sigma) V* with sigma uniform in [0.5, 2] and exactly r nonzero.
Matrix random_matrix_with_rank(Index m, Index n, Index r, Rng& rng);
Subspace random_subspace(Index ambient, Index dim, Rng& rng);
/// Rotates the first basis vector of V by theta toward a random unit vector of
/// V^perp. The result has gap_hat(V, V') = sin(theta).
Subspace perturb_subspace_exact_gap(const Subspace& v, double theta, Rng& rng);
/// (I + sX) A (I + sY) - A with s chosen so the norm equals `target`; keeps rank.
Matrix rank_preserving_perturbation(const Matrix& a, double target, Rng& rng);

/// Which parts of the scenario a theorem perturbs.
struct PerturbedParts {
  bool T = false;
  bool S = false;
  bool E = false;
};
PerturbedParts perturbed_parts(Theorem t);

/// Premise statuses of `t`, thresholds taken from the scenario's base inverse.
std::vector<HypothesisStatus> hypotheses_for(Theorem t, const PerturbationScenario& sc,
                                             const ToleranceProfile& tol = {});

GeneratedInstance generate(const GenConfig& config, Theorem theorem,
                           const ToleranceProfile& tol = {});

}  // namespace oil
