// oil: compute outer inverses from problem files and run verification
// campaigns over the perturbation bounds.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "oil/campaign.hpp"

namespace {

using oil::io::json;
namespace harness = oil::harness;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    // e.what() carries the byte offset and line/column of the failure.
    throw std::invalid_argument(path + ": " + e.what());
  }
}

int cmd_compute(const std::string& problem_path, const std::string& out_path,
                oil::ToleranceProfile tol) {
  tol.validate();
  const auto problem = oil::io::problem_from_json(parse_json_file(problem_path), tol);
  try {
    const oil::OuterInverseResult result = oil::compute(problem, tol);
    const std::string text = oil::io::to_json(result).dump(2) + "\n";
    if (out_path.empty() || out_path == "-")
      std::cout << text;
    else
      write_file(out_path, text);
  } catch (const oil::ExistenceError& e) {
    std::cerr << "oil compute: no outer inverse with prescribed range and kernel: " << e.what()
              << '\n';
    return harness::kInfeasibleInput;
  }
  return harness::kPass;
}

harness::CampaignConfig load_campaign(const std::string& path, int jobs) {
  auto config = harness::campaign_from_json(parse_json_file(path));
  harness::apply_env_overrides(config);
  if (jobs > 0) config.jobs = jobs;
  config.validate();
  return config;
}

int cmd_verify(const std::string& campaign_path, int jobs, const std::string& out_override) {
  auto config = load_campaign(campaign_path, jobs);
  if (!out_override.empty()) config.output_path = out_override;

  const harness::CampaignResult result = harness::run_campaign(config);
  if (config.format == harness::Format::csv)
    write_file(config.output_path, harness::render_csv(config, result.rows));
  else
    write_file(config.output_path, harness::render_json(config, result).dump(2) + "\n");
  write_file(config.output_path + ".summary.json", harness::to_json(result.summary).dump(2) + "\n");

  std::cout << harness::summary_text(result.summary);
  for (const auto& row : result.rows)
    if (row.violation())
      std::cerr << "BOUND VIOLATION: " << oil::to_string(row.theorem) << " trial " << row.trial_id
                << " seed " << row.seed << '\n';
  return result.summary.exit_code();
}

int cmd_sweep(const std::string& campaign_path, const std::string& axis_name, int points, int jobs,
              const std::string& out_override) {
  auto config = load_campaign(campaign_path, jobs);
  const harness::SweepAxis axis = harness::sweep_axis_from_string(axis_name);
  const harness::SweepResult result = harness::run_sweep(config, axis, points);
  const std::string text = harness::render_sweep_csv(config, result);
  if (out_override == "-")
    std::cout << text;
  else
    write_file(out_override.empty() ? config.output_path : out_override, text);
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outer generalized inverses and perturbation-bound verification"};
  app.set_version_flag("--version", std::string(harness::kVersion));
  app.require_subcommand(1);

  std::string problem_path, out_path;
  oil::ToleranceProfile tol;
  double rank_rtol = -1.0;
  auto* compute = app.add_subcommand("compute", "Compute A_{T,S}^(2) for a problem file");
  compute->add_option("problem", problem_path, "Problem JSON")->required();
  compute->add_option("--tol", tol.verify_atol, "Residual tolerance for verification");
  compute->add_option("--rank-rtol", rank_rtol, "Relative singular-value cutoff");
  compute->add_option("--cond-cap", tol.cond_cap, "Largest condition number accepted by solves");
  compute->add_option("--out,-o", out_path, "Result file (stdout when omitted)");

  std::string campaign_path, report_path;
  int jobs = 0;
  auto* verify = app.add_subcommand("verify", "Run a verification campaign");
  verify->add_option("campaign", campaign_path, "Campaign JSON")->required();
  verify->add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--out,-o", report_path, "Report path (overrides output_path)");

  std::string axis = "gap_T";
  int points = 20;
  auto* sweep = app.add_subcommand("sweep", "Sweep one perturbation ratio and tabulate bounds");
  sweep->add_option("campaign", campaign_path, "Campaign JSON")->required();
  sweep->add_option("--axis", axis, "gap_T, gap_S or norm_E")
      ->check(CLI::IsMember({"gap_T", "gap_S", "norm_E"}));
  sweep->add_option("--points", points, "Grid points (>= 2)")->check(CLI::Range(2, 100000));
  sweep->add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--out,-o", report_path, "Table path, '-' for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : harness::kOperationalError;
  }

  try {
    if (*compute) {
      if (rank_rtol >= 0.0) tol.rank_rtol = rank_rtol;
      return cmd_compute(problem_path, out_path, tol);
    }
    if (*verify) return cmd_verify(campaign_path, jobs, report_path);
    if (*sweep) return cmd_sweep(campaign_path, axis, points, jobs, report_path);
  } catch (const std::exception& e) {
    std::cerr << "oil: " << e.what() << '\n';
    return harness::kOperationalError;
  }
  return harness::kOperationalError;
}
