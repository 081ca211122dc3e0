#include "oil/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <thread>

namespace oil::harness {

namespace {

std::uint64_t theorem_stream(Theorem t) {
  for (std::size_t i = 0; i < std::size(kAllTheorems); ++i)
    if (kAllTheorems[i] == t) return i + 1;
  return 0;
}

void fill_from_report(TrialRow& row, const BoundReport& r) {
  row.gap_T = r.gap_T;
  row.gap_S = r.gap_S;
  row.norm_E = r.norm_E;
  row.hyp_ok = r.hypotheses_met;
  row.relerr = r.formula_vs_oracle_relerr;
  row.norm_bound = r.norm_bound;
  row.norm_actual = r.norm_actual;
  row.diff_bound = r.diff_bound;
  row.diff_actual = r.diff_actual;
  row.bounds_hold = r.bounds_hold;
  row.consistency_ok = r.consistency_ok;
}

// Runs fn(i) for i in [0, count) on `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, count ? count : 1);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
}

std::string header_block(std::string_view tool, const CampaignConfig& c) {
  std::ostringstream os;
  os << "# tool=oil " << tool << '\n'
     << "# version=" << kVersion << '\n'
     << "# config_hash=" << config_hash(c) << '\n'
     << "# seed=" << c.gen.seed << '\n'
     << "# rng=" << Rng::kIdentifier << '\n'
     << "# tolerances=" << io::to_json(c.tolerances).dump() << '\n';
  return os.str();
}

}  // namespace

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::gap_T: return "gap_T";
    case SweepAxis::gap_S: return "gap_S";
    case SweepAxis::norm_E: return "norm_E";
  }
  return "?";
}

SweepAxis sweep_axis_from_string(std::string_view name) {
  for (SweepAxis a : {SweepAxis::gap_T, SweepAxis::gap_S, SweepAxis::norm_E})
    if (to_string(a) == name) return a;
  throw std::invalid_argument("unknown sweep axis \"" + std::string(name) +
                              "\" (expected gap_T, gap_S or norm_E)");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void CampaignConfig::validate() const {
  gen.validate();
  tolerances.validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (theorems.empty()) throw std::invalid_argument("theorem set must be nonempty");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
}

CampaignConfig campaign_from_json(const io::json& j) {
  if (!j.is_object()) throw std::invalid_argument("campaign: expected a JSON object");
  CampaignConfig c;
  if (const auto it = j.find("gen"); it != j.end()) c.gen = io::gen_config_from_json(*it);
  if (const auto it = j.find("tolerances"); it != j.end()) c.tolerances = io::tolerance_from_json(*it);
  try {
    if (const auto it = j.find("theorems"); it != j.end()) {
      if (!it->is_array()) throw std::invalid_argument("campaign: \"theorems\" must be an array");
      c.theorems.clear();
      for (const auto& name : *it) {
        const auto t = theorem_from_string(name.get<std::string>());
        if (!t) throw std::invalid_argument("campaign: unknown theorem \"" + name.get<std::string>() + "\"");
        c.theorems.push_back(*t);
      }
    }
    if (const auto it = j.find("trials"); it != j.end()) c.trials = it->get<int>();
    if (const auto it = j.find("output_path"); it != j.end()) c.output_path = it->get<std::string>();
    if (const auto it = j.find("jobs"); it != j.end()) c.jobs = it->get<int>();
    if (const auto it = j.find("format"); it != j.end()) {
      const auto f = it->get<std::string>();
      if (f == "csv") c.format = Format::csv;
      else if (f == "json") c.format = Format::json;
      else throw std::invalid_argument("campaign: format must be \"csv\" or \"json\"");
    }
  } catch (const io::json::exception& e) {
    throw std::invalid_argument(std::string("campaign: ") + e.what());
  }
  c.validate();
  return c;
}

io::json to_json(const CampaignConfig& c) {
  io::json theorems = io::json::array();
  for (Theorem t : c.theorems) theorems.push_back(std::string(to_string(t)));
  return {{"gen", io::to_json(c.gen)},
          {"theorems", std::move(theorems)},
          {"trials", c.trials},
          {"tolerances", io::to_json(c.tolerances)},
          {"format", c.format == Format::csv ? "csv" : "json"}};
}

std::string config_hash(const CampaignConfig& c) {
  // Output path and job count do not change the rows, so they stay out.
  const std::string canonical = to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

void apply_env_overrides(CampaignConfig& c) {
  const char* env = std::getenv("OIL_SEED");
  if (!env || !*env) return;
  std::uint64_t seed = 0;
  const std::string_view text(env);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw std::invalid_argument("OIL_SEED must be an unsigned 64-bit integer");
  c.gen.seed = seed;
}

bool TrialRow::violation() const {
  if (skipped || !hyp_ok) return false;
  if (!bounds_hold) return true;
  // For the stable-perturbation lemma the equivalence itself is a conclusion.
  return theorem == Theorem::lemma21 && !consistency_ok;
}

TrialRow run_trial(const CampaignConfig& config, Theorem theorem, int trial_index) {
  TrialRow row;
  row.trial_id = trial_index;
  row.theorem = theorem;
  row.seed = derive_seed(config.gen.seed, theorem_stream(theorem),
                         static_cast<std::uint64_t>(trial_index));
  GenConfig gc = config.gen;
  gc.seed = row.seed;
  const ToleranceProfile& tol = config.tolerances;

  try {
    const GeneratedInstance inst = generate(gc, theorem, tol);
    const PerturbationScenario& sc = inst.scenario;
    switch (theorem) {
      case Theorem::lemma21:
        fill_from_report(row, stable_bounds(sc.base.A, sc.E, tol));
        break;
      case Theorem::lemma31: {
        const GapPropagationReport gp = gap_propagation(sc.base, sc.T_prime, tol);
        row.gap_T = gp.gap_T;
        row.hyp_ok = gp.hypothesis.satisfied;
        row.norm_bound = gp.directed_bound;
        row.norm_actual = gp.directed_actual;
        row.diff_bound = gp.bound;
        row.diff_actual = gp.actual;
        row.bounds_hold = gp.bounds_hold;
        break;
      }
      case Theorem::prop31:
        fill_from_report(row, perturb_T(sc.base, sc.T_prime, tol));
        break;
      case Theorem::prop32:
        fill_from_report(row, perturb_S(sc.base, sc.S_prime, tol));
        break;
      case Theorem::thm31:
        fill_from_report(row, perturb_TS(sc.base, sc.T_prime, sc.S_prime, tol));
        break;
      case Theorem::lemma32:
        fill_from_report(row, perturb_A(sc.base, sc.E, tol));
        break;
      case Theorem::thm32:
        fill_from_report(row, perturb_all(sc, tol));
        break;
    }
  } catch (const GenerationError& e) {
    row.skipped = true;
    row.skip_reason = e.what();
  } catch (const std::exception& e) {
    row.skipped = true;
    row.skip_reason = std::string("numeric: ") + e.what();
  }
  return row;
}

int CampaignSummary::total_violations() const {
  int v = 0;
  for (const auto& t : per_theorem) v += t.bounds_violations;
  return v;
}

int CampaignSummary::exit_code() const {
  if (total_violations() > 0) return kBoundViolation;
  for (const auto& t : per_theorem) {
    if (t.max_relerr > kCampaignRelerrLimit || t.consistency_failures > 0) return kOperationalError;
    if (t.trials_run > 0 && t.skipped > kMaxSkipFraction * t.trials_run) return kOperationalError;
  }
  return kPass;
}

CampaignSummary summarize(const CampaignConfig& config, const std::vector<TrialRow>& rows) {
  CampaignSummary s;
  for (Theorem t : config.theorems) {
    TheoremSummary ts;
    ts.theorem = t;
    for (const TrialRow& r : rows) {
      if (r.theorem != t) continue;
      ++ts.trials_run;
      if (r.skipped) {
        ++ts.skipped;
        continue;
      }
      if (!r.hyp_ok) continue;
      ++ts.hypotheses_met_count;
      if (r.violation()) ++ts.bounds_violations;
      if (!r.consistency_ok && t != Theorem::lemma21) ++ts.consistency_failures;
      ts.max_relerr = std::max(ts.max_relerr, std::isnan(r.relerr) ? HUGE_VAL : r.relerr);
      ts.worst_margin_norm = std::min(ts.worst_margin_norm, r.margin_norm());
      ts.worst_margin_diff = std::min(ts.worst_margin_diff, r.margin_diff());
    }
    s.per_theorem.push_back(ts);
  }
  return s;
}

CampaignResult run_campaign(const CampaignConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  const std::size_t per = static_cast<std::size_t>(config.trials);
  std::vector<TrialRow> rows(config.theorems.size() * per);
  parallel_for(rows.size(), config.jobs, [&](std::size_t i) {
    rows[i] = run_trial(config, config.theorems[i / per], static_cast<int>(i % per));
  });

  CampaignResult result{std::move(rows), {}};
  result.summary = summarize(config, result.rows);
  result.summary.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string render_csv(const CampaignConfig& config, const std::vector<TrialRow>& rows) {
  std::ostringstream os;
  os << header_block("verify", config) << kCsvColumns << '\n';
  for (const TrialRow& r : rows) {
    if (r.skipped) continue;
    os << r.trial_id << ',' << to_string(r.theorem) << ',' << format_double(r.gap_T) << ','
       << format_double(r.gap_S) << ',' << format_double(r.norm_E) << ',' << (r.hyp_ok ? 1 : 0)
       << ',' << format_double(r.relerr) << ',' << format_double(r.norm_bound) << ','
       << format_double(r.norm_actual) << ',' << format_double(r.diff_bound) << ','
       << format_double(r.diff_actual) << ',' << format_double(r.margin_norm()) << ','
       << format_double(r.margin_diff()) << '\n';
  }
  return os.str();
}

namespace {

io::json finite_or_null(double v) { return std::isfinite(v) ? io::json(v) : io::json(nullptr); }

}  // namespace

io::json to_json(const CampaignSummary& s) {
  io::json per = io::json::array();
  for (const TheoremSummary& t : s.per_theorem)
    per.push_back({{"theorem", std::string(to_string(t.theorem))},
                   {"trials_run", t.trials_run},
                   {"hypotheses_met_count", t.hypotheses_met_count},
                   {"bounds_violations", t.bounds_violations},
                   {"consistency_failures", t.consistency_failures},
                   {"skipped", t.skipped},
                   {"max_relerr", finite_or_null(t.max_relerr)},
                   {"worst_margin_norm", finite_or_null(t.worst_margin_norm)},
                   {"worst_margin_diff", finite_or_null(t.worst_margin_diff)}});
  return {{"per_theorem", std::move(per)},
          {"bounds_violations", s.total_violations()},
          {"exit_code", s.exit_code()},
          {"wall_time_seconds", s.wall_time_seconds}};
}

io::json render_json(const CampaignConfig& config, const CampaignResult& result) {
  io::json rows = io::json::array();
  for (const TrialRow& r : result.rows) {
    if (r.skipped) continue;
    rows.push_back({{"trial_id", r.trial_id},
                    {"theorem", std::string(to_string(r.theorem))},
                    {"gap_T", r.gap_T},
                    {"gap_S", r.gap_S},
                    {"norm_E", r.norm_E},
                    {"hyp_ok", r.hyp_ok},
                    {"relerr", finite_or_null(r.relerr)},
                    {"norm_bound", finite_or_null(r.norm_bound)},
                    {"norm_actual", r.norm_actual},
                    {"diff_bound", finite_or_null(r.diff_bound)},
                    {"diff_actual", r.diff_actual},
                    {"margin_norm", finite_or_null(r.margin_norm())},
                    {"margin_diff", finite_or_null(r.margin_diff())}});
  }
  io::json header = {{"tool", "oil verify"},
                     {"version", std::string(kVersion)},
                     {"config_hash", config_hash(config)},
                     {"seed", config.gen.seed},
                     {"rng", std::string(Rng::kIdentifier)},
                     {"tolerances", io::to_json(config.tolerances)},
                     {"config", to_json(config)}};
  // Wall time stays out so that reports of equal configs are byte-identical.
  io::json summary = to_json(result.summary);
  summary.erase("wall_time_seconds");
  return {{"header", std::move(header)}, {"rows", std::move(rows)}, {"summary", std::move(summary)}};
}

std::string summary_text(const CampaignSummary& s) {
  std::ostringstream os;
  os << std::left << std::setw(9) << "theorem" << std::right << std::setw(8) << "trials"
     << std::setw(8) << "hyp_ok" << std::setw(8) << "skipped" << std::setw(11) << "violations"
     << std::setw(13) << "max_relerr" << std::setw(15) << "worst_m_norm" << std::setw(15)
     << "worst_m_diff" << '\n';
  os << std::setprecision(3) << std::scientific;
  for (const TheoremSummary& t : s.per_theorem)
    os << std::left << std::setw(9) << to_string(t.theorem) << std::right << std::setw(8)
       << t.trials_run << std::setw(8) << t.hypotheses_met_count << std::setw(8) << t.skipped
       << std::setw(11) << t.bounds_violations << std::setw(13) << t.max_relerr << std::setw(15)
       << t.worst_margin_norm << std::setw(15) << t.worst_margin_diff << '\n';
  os << std::fixed << std::setprecision(3) << "wall_time=" << s.wall_time_seconds << "s"
     << " exit_code=" << s.exit_code() << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<double> sweep_grid(int points) {
  if (points < 2) throw std::invalid_argument("sweep needs at least 2 points");
  std::vector<double> grid{0.0};
  if (points == 2) {
    grid.push_back(0.95);
    return grid;
  }
  constexpr double kDecades = 3.0;
  for (int i = 1; i < points; ++i) {
    const double exponent = -kDecades * static_cast<double>(points - 1 - i) / (points - 2);
    grid.push_back(0.95 * std::pow(10.0, exponent));
  }
  return grid;
}

namespace {

bool axis_applies(Theorem t, SweepAxis axis) {
  const PerturbedParts p = perturbed_parts(t);
  switch (axis) {
    case SweepAxis::gap_T: return p.T;
    case SweepAxis::gap_S: return p.S;
    case SweepAxis::norm_E: return p.E;
  }
  return false;
}

}  // namespace

SweepResult run_sweep(const CampaignConfig& config, SweepAxis axis, int points) {
  config.validate();
  const std::vector<double> grid = sweep_grid(points);
  SweepResult out;
  out.axis = axis;

  std::vector<Theorem> theorems;
  for (Theorem t : config.theorems)
    if (axis_applies(t, axis)) theorems.push_back(t);
  if (theorems.empty())
    throw std::invalid_argument("no theorem in the campaign perturbs " + std::string(to_string(axis)));

  bool relerr_bad = false;
  for (Theorem t : theorems) {
    for (int p = 0; p < points; ++p) {
      CampaignConfig c = config;
      c.theorems = {t};
      switch (axis) {
        case SweepAxis::gap_T: c.gen.target_gap_T = grid[p]; break;
        case SweepAxis::gap_S: c.gen.target_gap_S = grid[p]; break;
        case SweepAxis::norm_E: c.gen.target_norm_E_ratio = grid[p]; break;
      }
      std::vector<TrialRow> rows(static_cast<std::size_t>(c.trials));
      parallel_for(rows.size(), c.jobs,
                   [&](std::size_t i) { rows[i] = run_trial(c, t, static_cast<int>(i)); });

      SweepRow sr;
      sr.theorem = t;
      sr.point = p;
      sr.ratio = grid[p];
      int used = 0;
      for (const TrialRow& r : rows) {
        ++sr.trials;
        if (r.skipped) {
          ++sr.skipped;
          continue;
        }
        if (r.hyp_ok) ++sr.hypotheses_met;
        if (r.violation()) ++sr.violations;
        if (r.hyp_ok && !(r.relerr <= kCampaignRelerrLimit)) relerr_bad = true;
        ++used;
        sr.mean_norm_actual += r.norm_actual;
        sr.mean_norm_bound += r.norm_bound;
        sr.mean_diff_actual += r.diff_actual;
        sr.mean_diff_bound += r.diff_bound;
        sr.max_norm_actual = std::max(sr.max_norm_actual, r.norm_actual);
        sr.max_norm_bound = std::max(sr.max_norm_bound, r.norm_bound);
        sr.max_diff_actual = std::max(sr.max_diff_actual, r.diff_actual);
        sr.max_diff_bound = std::max(sr.max_diff_bound, r.diff_bound);
        sr.max_relerr = std::max(sr.max_relerr, r.relerr);
      }
      if (used > 0) {
        sr.mean_norm_actual /= used;
        sr.mean_norm_bound /= used;
        sr.mean_diff_actual /= used;
        sr.mean_diff_bound /= used;
      }
      if (sr.violations > 0) out.exit_code = kBoundViolation;
      else if (sr.skipped > kMaxSkipFraction * sr.trials && out.exit_code == kPass)
        out.exit_code = kOperationalError;
      out.rows.push_back(sr);
    }
  }
  if (relerr_bad && out.exit_code == kPass) out.exit_code = kOperationalError;
  return out;
}

std::string render_sweep_csv(const CampaignConfig& config, const SweepResult& result) {
  std::ostringstream os;
  os << header_block("sweep", config) << "# axis=" << to_string(result.axis) << '\n'
     << "theorem,point,ratio,trials,hyp_ok,skipped,violations,mean_norm_actual,max_norm_actual,"
        "mean_norm_bound,max_norm_bound,mean_diff_actual,max_diff_actual,mean_diff_bound,"
        "max_diff_bound,max_relerr\n";
  for (const SweepRow& r : result.rows)
    os << to_string(r.theorem) << ',' << r.point << ',' << format_double(r.ratio) << ','
       << r.trials << ',' << r.hypotheses_met << ',' << r.skipped << ',' << r.violations << ','
       << format_double(r.mean_norm_actual) << ',' << format_double(r.max_norm_actual) << ','
       << format_double(r.mean_norm_bound) << ',' << format_double(r.max_norm_bound) << ','
       << format_double(r.mean_diff_actual) << ',' << format_double(r.max_diff_actual) << ','
       << format_double(r.mean_diff_bound) << ',' << format_double(r.max_diff_bound) << ','
       << format_double(r.max_relerr) << '\n';
  return os.str();
}

}  // namespace oil::harness
