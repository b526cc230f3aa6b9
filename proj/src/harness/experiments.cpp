#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "stablab/dual_search.hpp"
#include "stablab/harness.hpp"
#include "stablab/stability.hpp"

namespace stablab::harness {
namespace {

constexpr std::uint64_t kOperatorSalt = 0x5eed;

// Bounds are algebraic consequences of the construction; the slack only
// absorbs rounding in the norm evaluations.
constexpr double kRoundingSlack = 1e-12;

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
  return out;
}

std::string csv_preamble(const std::string& kind, const std::vector<std::string>& columns) {
  return fmt::format("# stablab-csv schema={} kind={}\n", kCsvSchemaVersion, kind) + join(columns);
}

const std::vector<std::string> kTheorem1Columns{
    "instance", "family",    "operator",   "s",          "p",          "a",        "b",
    "c",        "t",         "r",          "lambda",     "dist1_f",    "dist1_Tf", "residual_f",
    "residual_T", "norm_u_p", "ratio_p",   "ratio_f",    "ratio_T",    "cube_count", "omega_measure",
    "long_range", "degenerate", "root_guard"};

const std::vector<std::string> kTheorem2Columns{
    "instance", "family",     "operator",     "support",    "s",         "p",      "r",
    "t",        "c_star",     "c_lower",      "p_ratio",    "f_ratio",   "T_ratio", "iterations",
    "inconclusive_steps", "status", "certified", "support_ok"};

std::string b2s(bool b) { return b ? "1" : "0"; }

double level_identity_error(const StabilityReport& r) {
  const double lhs = std::pow(r.lambda, r.p - 1.0) * r.a;
  const double rhs = std::pow(r.b, r.p);
  return std::fabs(lhs - rhs) / rhs;
}

}  // namespace

CampaignResult run_theorem1(const ExperimentConfig& cfg) {
  const auto corpus = generate_corpus(cfg);
  const auto svals = sweep_values(cfg.s_sweep);
  const Exponent p = Exponent::finite(cfg.p);
  const double ratio_p_bound = 1.0 + std::pow(2.0, (cfg.p - 1.0) / cfg.p);

  struct Job {
    std::size_t entry;
    OperatorKind kind;
  };
  std::vector<Job> jobs;
  for (std::size_t e = 0; e < corpus.size(); ++e) {
    for (auto k : cfg.operators) jobs.push_back({e, k});
  }
  std::vector<std::vector<StabilityReport>> reports(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
    const auto op = make_operator(jobs[i].kind, cfg.n, cfg.seed + kOperatorSalt);
    for (double s : svals) reports[i].push_back(bourgain_construct(corpus[jobs[i].entry].f, op, s, p).report);
  });

  CampaignResult out;
  out.csv = csv_preamble("theorem1", kTheorem1Columns);
  struct Max {
    double ratio_p = 0.0, ratio_f = 0.0, ratio_T = 0.0, long_range = 0.0;
  };
  std::map<std::string, Max> maxima;
  std::size_t bad_p = 0, bad_f = 0, bad_T = 0, bad_level = 0, rows = 0, failing = 0, level_rows = 0;
  double worst_level = 0.0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const std::string name = to_string(jobs[i].kind);
    Max& m = maxima[name];
    for (const auto& r : reports[i]) {
      ++rows;
      out.csv += join({std::to_string(jobs[i].entry), corpus[jobs[i].entry].family, name, format_double(r.s),
                       format_double(r.p), format_double(r.a), format_double(r.b), format_double(r.c),
                       format_double(r.t), format_double(r.r), format_double(r.lambda), format_double(r.dist1_f),
                       format_double(r.dist1_Tf), format_double(r.residual_f), format_double(r.residual_T),
                       format_double(r.norm_u_p), format_double(r.ratio_p), format_double(r.ratio_f),
                       format_double(r.ratio_T), std::to_string(r.cube_count), format_double(r.omega_measure),
                       format_double(r.long_range), b2s(r.degenerate), b2s(r.root_guard)});
      const bool ok_p = r.ratio_p <= ratio_p_bound * (1.0 + kRoundingSlack);
      const bool ok_f = r.ratio_f <= 2.0 * (1.0 + kRoundingSlack);
      const bool ok_T = std::isfinite(r.ratio_T);
      bad_p += !ok_p;
      bad_f += !ok_f;
      bad_T += !ok_T;
      failing += !(ok_p && ok_f && ok_T);
      if (r.a > kDegenerateMass) {
        ++level_rows;
        const double err = level_identity_error(r);
        worst_level = std::max(worst_level, err);
        if (!(err <= 1e-9)) ++bad_level;
      }
      m.ratio_p = std::max(m.ratio_p, r.ratio_p);
      m.ratio_f = std::max(m.ratio_f, r.ratio_f);
      m.ratio_T = std::max(m.ratio_T, r.ratio_T);
      m.long_range = std::max(m.long_range, r.long_range);
    }
  }
  Json per_op = Json::object();
  for (const auto& [name, m] : maxima) {
    per_op[name] = {{"ratio_p", m.ratio_p}, {"ratio_f", m.ratio_f}, {"ratio_T", m.ratio_T}, {"long_range", m.long_range}};
  }
  out.summary = {{"rows", rows},
                 {"failing_rows", failing},
                 {"level_identity_rows", level_rows},
                 {"corpus_size", corpus.size()},
                 {"bounds", {{"ratio_p", ratio_p_bound}, {"ratio_f", 2.0}}},
                 {"max", per_op},
                 {"violations",
                  {{"ratio_p", bad_p}, {"ratio_f", bad_f}, {"ratio_T_nonfinite", bad_T}, {"level_identity", bad_level}}},
                 {"level_identity_max_rel_error", worst_level}};
  out.ok = bad_p == 0 && bad_f == 0 && bad_T == 0 && bad_level == 0;
  return out;
}

CampaignResult run_theorem2(const ExperimentConfig& cfg) {
  const auto corpus = generate_corpus(cfg);
  const auto svals = sweep_values(cfg.dual_s_sweep);
  const Exponent p = Exponent::finite(cfg.p);
  const GridSet half = GridSet::cells_in(cfg.n, 0.0, 0.5);
  std::vector<bool> modes;
  if (cfg.support != SupportMode::half) modes.push_back(false);
  if (cfg.support != SupportMode::none) modes.push_back(true);

  struct Job {
    std::size_t entry;
    OperatorKind kind;
    bool supported;
  };
  std::vector<Job> jobs;
  for (std::size_t e = 0; e < corpus.size(); ++e) {
    for (auto k : cfg.dual_operators) {
      for (bool m : modes) jobs.push_back({e, k, m});
    }
  }
  SolverOptions opts;
  opts.tol_feas = cfg.tol_feas;
  opts.max_iter = cfg.max_iter;
  struct Row {
    double s, r, t;
    DualResult res;
  };
  std::vector<std::vector<Row>> rows(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
    const auto op = make_operator(jobs[i].kind, cfg.n, cfg.seed + kOperatorSalt);
    const GridFunction& base = corpus[jobs[i].entry].f;
    const GridFunction f = jobs[i].supported ? compress_to_left_half(base) : base;
    for (double s : svals) {
      const DualInstance inst =
          make_instance(f, op, s, p, jobs[i].supported ? std::optional<GridSet>(half) : std::nullopt);
      rows[i].push_back({s, inst.r, inst.t, min_constant(inst, cfg.dual_tol, opts)});
    }
  });

  CampaignResult out;
  out.csv = csv_preamble("theorem2", kTheorem2Columns);
  std::size_t count = 0, uncertified = 0, inconclusive = 0, support_bad = 0, failing = 0;
  std::size_t supported_rows = 0, supported_failing = 0;
  std::map<std::string, double> c_max;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const std::string name = to_string(jobs[i].kind);
    const std::string support = jobs[i].supported ? "half" : "none";
    for (const auto& row : rows[i]) {
      const DualResult& d = row.res;
      ++count;
      if (!d.certified) ++uncertified;
      failing += !(d.certified && d.residuals.support_ok);
      if (jobs[i].supported) {
        ++supported_rows;
        supported_failing += !(d.certified && d.residuals.support_ok);
      }
      if (d.status == "inconclusive") ++inconclusive;
      if (!d.residuals.support_ok) ++support_bad;
      double& m = c_max[name + "/" + support];
      m = std::max(m, d.c_star);
      out.csv += join({std::to_string(jobs[i].entry), corpus[jobs[i].entry].family, name, support,
                       format_double(row.s), format_double(cfg.p), format_double(row.r), format_double(row.t),
                       format_double(d.c_star), format_double(d.c_lower), format_double(d.residuals.p_ratio),
                       format_double(d.residuals.f_ratio), format_double(d.residuals.T_ratio),
                       std::to_string(d.iterations), std::to_string(d.inconclusive_steps), d.status,
                       b2s(d.certified), b2s(d.residuals.support_ok)});
    }
  }
  out.summary = {{"rows", count},
                 {"failing_rows", failing},
                 {"support_rows", supported_rows},
                 {"support_failing_rows", supported_failing},
                 {"corpus_size", corpus.size()},
                 {"c_star_max", c_max},
                 {"uncertified", uncertified},
                 {"inconclusive", inconclusive},
                 {"support_violations", support_bad}};
  out.ok = uncertified == 0 && support_bad == 0;
  return out;
}

}  // namespace stablab::harness
