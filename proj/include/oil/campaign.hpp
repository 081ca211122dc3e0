#pragma once

// Verification campaigns: generate instances per theorem, evaluate the
// matching perturbation operation, and aggregate rows into summaries.

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "oil/io.hpp"

namespace oil::harness {

inline constexpr std::string_view kVersion = "0.1.0";

/// Process exit codes of the CLI.
enum ExitCode : int {
  kPass = 0,
  kOperationalError = 1,
  kInfeasibleInput = 2,
  kBoundViolation = 3,
};

/// Formula/oracle disagreement beyond this fails a campaign.
inline constexpr double kCampaignRelerrLimit = 1e-6;
/// Fraction of skipped trials above which a campaign fails.
inline constexpr double kMaxSkipFraction = 0.05;

enum class Format { csv, json };
enum class SweepAxis { gap_T, gap_S, norm_E };

std::string_view to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(std::string_view name);

struct CampaignConfig {
  GenConfig gen;
  std::vector<Theorem> theorems{std::begin(kAllTheorems), std::end(kAllTheorems)};
  int trials = 200;
  ToleranceProfile tolerances;
  std::string output_path = "oil_report.csv";
  Format format = Format::csv;
  int jobs = 1;

  void validate() const;
};

CampaignConfig campaign_from_json(const io::json& j);
io::json to_json(const CampaignConfig& c);
/// FNV-1a 64 of the canonical config JSON, as 16 hex digits.
std::string config_hash(const CampaignConfig& c);
/// Applies OIL_SEED when set; throws std::invalid_argument on a malformed value.
void apply_env_overrides(CampaignConfig& c);

/// Fixed CSV column order.
inline constexpr std::string_view kCsvColumns =
    "trial_id,theorem,gap_T,gap_S,norm_E,hyp_ok,relerr,norm_bound,norm_actual,diff_bound,"
    "diff_actual,margin_norm,margin_diff";

struct TrialRow {
  int trial_id = 0;
  Theorem theorem = Theorem::prop31;
  std::uint64_t seed = 0;
  double gap_T = 0.0;
  double gap_S = 0.0;
  double norm_E = 0.0;
  bool hyp_ok = false;
  double relerr = 0.0;
  double norm_bound = 0.0;
  double norm_actual = 0.0;
  double diff_bound = 0.0;
  double diff_actual = 0.0;
  bool bounds_hold = false;
  bool consistency_ok = true;
  bool skipped = false;
  std::string skip_reason;

  double margin_norm() const { return norm_bound - norm_actual; }
  double margin_diff() const { return diff_bound - diff_actual; }
  /// A premise held but a conclusion failed numerically.
  bool violation() const;
};

struct TheoremSummary {
  Theorem theorem = Theorem::prop31;
  int trials_run = 0;
  int hypotheses_met_count = 0;
  int bounds_violations = 0;
  int consistency_failures = 0;
  int skipped = 0;
  double max_relerr = 0.0;
  double worst_margin_norm = std::numeric_limits<double>::infinity();
  double worst_margin_diff = std::numeric_limits<double>::infinity();
};

struct CampaignSummary {
  std::vector<TheoremSummary> per_theorem;
  double wall_time_seconds = 0.0;

  int total_violations() const;
  int exit_code() const;
};

struct CampaignResult {
  std::vector<TrialRow> rows;  // theorem-major, trial index order
  CampaignSummary summary;
};

TrialRow run_trial(const CampaignConfig& config, Theorem theorem, int trial_index);
CampaignResult run_campaign(const CampaignConfig& config);
CampaignSummary summarize(const CampaignConfig& config, const std::vector<TrialRow>& rows);

std::string render_csv(const CampaignConfig& config, const std::vector<TrialRow>& rows);
io::json render_json(const CampaignConfig& config, const CampaignResult& result);
io::json to_json(const CampaignSummary& s);
std::string summary_text(const CampaignSummary& s);

struct SweepRow {
  Theorem theorem = Theorem::prop31;
  int point = 0;
  double ratio = 0.0;
  int trials = 0;
  int hypotheses_met = 0;
  int skipped = 0;
  int violations = 0;
  double mean_norm_actual = 0.0, max_norm_actual = 0.0;
  double mean_norm_bound = 0.0, max_norm_bound = 0.0;
  double mean_diff_actual = 0.0, max_diff_actual = 0.0;
  double mean_diff_bound = 0.0, max_diff_bound = 0.0;
  double max_relerr = 0.0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::gap_T;
  std::vector<SweepRow> rows;
  int exit_code = kPass;
};

/// 0 followed by a log-spaced grid over three decades ending at 0.95.
std::vector<double> sweep_grid(int points);
SweepResult run_sweep(const CampaignConfig& config, SweepAxis axis, int points);
std::string render_sweep_csv(const CampaignConfig& config, const SweepResult& result);

/// Shortest round-trip decimal for a double ("inf", "-inf", "nan" otherwise).
std::string format_double(double v);

}  // namespace oil::harness
