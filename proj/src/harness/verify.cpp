#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>

#include <fmt/format.h>

#include "stablab/cz.hpp"
#include "stablab/distance.hpp"
#include "stablab/dual_search.hpp"
#include "stablab/harness.hpp"
#include "stablab/oracle.hpp"
#include "stablab/random.hpp"
#include "stablab/stability.hpp"

namespace stablab::harness {
namespace {

constexpr double kGoldenRelTol = 1e-9;

GridFunction random_function(std::size_t n, Rng& rng, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = scale * rng.normal();
  return GridFunction(std::move(v));
}

// Zero Nyquist coefficient: sum of (-1)^i f_i vanishes.
GridFunction without_nyquist(const GridFunction& f) {
  const std::size_t n = f.size();
  double alt = 0.0;
  for (std::size_t i = 0; i < n; ++i) alt += (i % 2 ? -1.0 : 1.0) * f[i];
  alt /= static_cast<double>(n);
  std::vector<double> v(f.vec());
  for (std::size_t i = 0; i < n; ++i) v[i] -= (i % 2 ? -1.0 : 1.0) * alt;
  return GridFunction(std::move(v));
}

std::vector<LinearOperatorSpec> operator_zoo(std::size_t n, std::uint64_t seed) {
  const GridSet half = GridSet::cells_in(n, 0.0, 0.5);
  return {LinearOperatorSpec::hilbert(n), LinearOperatorSpec::haar_random(n, seed),
          LinearOperatorSpec::identity_minus_mean(n), LinearOperatorSpec::hilbert(n).restricted_to(half),
          LinearOperatorSpec::haar_random(n, seed + 1).restricted_to(half)};
}

std::string zoo_name(const LinearOperatorSpec& op) {
  return to_string(op.kind) + (op.restriction ? "/restricted" : "");
}

// The fault-injection fixture pretends every operator is self-adjoint.
LinearOperatorSpec adjoint_under_test(const ExperimentConfig& cfg, const LinearOperatorSpec& op) {
  return cfg.corrupt_adjoint ? op : adjoint(op);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

GoldenStore::GoldenStore(std::filesystem::path file, std::string fingerprint, bool update)
    : file_(std::move(file)), fingerprint_(std::move(fingerprint)), update_(update), data_(Json::object()) {
  std::ifstream in(file_);
  if (in) data_ = Json::parse(in);
}

std::optional<double> GoldenStore::get(const std::string& key) const {
  if (!data_.contains(fingerprint_) || !data_[fingerprint_].contains(key)) return std::nullopt;
  return data_[fingerprint_][key].get<double>();
}

std::string GoldenStore::check(const std::string& key, double value, double rel_tol) {
  const auto stored = get(key);
  if (!stored || update_) {
    data_[fingerprint_][key] = value;
    dirty_ = true;
    return stored ? "updated" : "frozen";
  }
  const double scale = std::max({std::fabs(*stored), std::fabs(value), 1e-300});
  return std::fabs(*stored - value) <= rel_tol * scale ? "match" : "mismatch";
}

void GoldenStore::save() const {
  if (!dirty_) return;
  std::filesystem::create_directories(file_.parent_path());
  std::ofstream out(file_);
  out << data_.dump(2) << '\n';
}

std::string config_fingerprint(const ExperimentConfig& cfg) {
  Json j = to_json(cfg);
  j.erase("update_golden");
  j.erase("threads");
  j["verify"].erase("corrupt_adjoint");
  return fmt::format("{:016x}", fnv1a(j.dump()));
}

SuiteResult suite_distance_oracle(const ExperimentConfig& cfg) {
  SuiteResult out{"distance_oracle"};
  Rng rng(cfg.seed ^ 0xd15ULL);
  const double ps[] = {1.5, 2.0, 3.0};
  double worst = 0.0;
  for (int trial = 0; trial < cfg.distance_trials; ++trial) {
    const std::size_t n = rng.below(2) ? 4 : 2;
    const Exponent p = Exponent::finite(ps[trial % 3]);
    const GridFunction f = random_function(n, rng, 2.0);
    const double s = rng.uniform(0.05, 1.2) * norm(f, p);
    bool pass = true;
    for (Exponent amb : {Exponent::one(), Exponent::infinity()}) {
      const DistanceResult r = distance(f, s, p, amb);
      const double ref = oracle::brute_force_distance(f, s, p, amb);
      const double err = std::fabs(r.value - ref);
      worst = std::max(worst, err);
      pass = pass && err <= 1e-5 && norm(r.minimizer, p) <= s * (1.0 + 1e-9);
    }
    out.record(pass);
  }
  out.details["max_abs_error"] = worst;
  return out;
}

SuiteResult suite_cz(const ExperimentConfig& cfg) {
  SuiteResult out{"cz"};
  Rng rng(cfg.seed ^ 0xc2ULL);
  const std::vector<double> ps{1.5, 2.0, 3.0, 4.0};
  for (int trial = 0; trial < cfg.cz_trials; ++trial) {
    const std::size_t n = rng.below(2) ? 256 : 64;
    std::vector<double> v(n);
    // Heavy-tailed values so that cubes appear at many scales.
    for (auto& x : v) x = rng.normal() * std::exp(2.5 * rng.normal());
    const GridFunction f(std::move(v));
    const double f1 = norm(f, Exponent::one());
    const double level = f1 * std::exp(rng.uniform(0.0, std::log(60.0)));
    const CzDecomposition d = cz_decompose(f, level, cfg.dilation_factor);
    out.record(verify_cz(d, f, ps).all_ok());
  }
  return out;
}

SuiteResult suite_operators(const ExperimentConfig& cfg) {
  SuiteResult out{"operators"};
  Rng rng(cfg.seed ^ 0x0bULL);
  const std::size_t n = cfg.n;
  Json per_kind = Json::object();
  for (const auto& op : operator_zoo(n, cfg.seed)) {
    const LinearOperatorSpec star = adjoint_under_test(cfg, op);
    double worst_pair = 0.0, worst_lin = 0.0;
    std::size_t passed = 0;
    for (int k = 0; k < cfg.operator_probes; ++k) {
      const GridFunction f = random_function(n, rng), g = random_function(n, rng);
      const double a = rng.normal(), b = rng.normal();
      const double pair = std::fabs(inner(apply(op, f), g) - inner(f, apply(star, g)));
      const double lin = max_abs_difference(apply(op, a * f + b * g), a * apply(op, f) + b * apply(op, g));
      worst_pair = std::max(worst_pair, pair);
      worst_lin = std::max(worst_lin, lin);
      const bool pass = pair <= 1e-10 && lin <= 1e-10;
      passed += pass;
      out.record(pass);
    }
    per_kind[zoo_name(op)] = {{"adjoint_pairing_max", worst_pair}, {"linearity_max", worst_lin}, {"passed", passed}};
  }
  out.details["pairing"] = per_kind;

  // Multiplier identities of the conjugate function, below the Nyquist mode.
  double worst_mult = 0.0;
  for (std::size_t k = 1; k < n / 2; k *= 2) {
    const double freq = 2.0 * std::numbers::pi * static_cast<double>(k);
    const auto c = GridFunction::sample(n, [&](double x) { return std::cos(freq * x); });
    const auto s = GridFunction::sample(n, [&](double x) { return std::sin(freq * x); });
    const double err = std::max(max_abs_difference(hilbert_transform(c), s),
                                max_abs_difference(hilbert_transform(s), -c));
    worst_mult = std::max(worst_mult, err);
    out.record(err <= 1e-9);
  }
  out.details["cos_to_sin_max"] = worst_mult;

  const auto H = LinearOperatorSpec::hilbert(n);
  const auto Hstar = adjoint_under_test(cfg, H);
  const auto haar = LinearOperatorSpec::haar_random(n, cfg.seed);
  double worst_square = 0.0, worst_parseval = 0.0, worst_invol = 0.0, worst_anti = 0.0;
  for (int k = 0; k < cfg.operator_probes; ++k) {
    const GridFunction f = without_nyquist(random_function(n, rng));
    const GridFunction g = random_function(n, rng);
    const GridFunction centered = f - GridFunction::constant(n, mean(f));
    const double sq = max_abs_difference(apply(H, apply(H, f)), -centered);
    const double pars = std::fabs(norm(apply(H, f), Exponent::finite(2)) - norm(centered, Exponent::finite(2)));
    const GridFunction gc = g - GridFunction::constant(n, mean(g));
    const double inv = max_abs_difference(apply(haar, apply(haar, g)), gc);
    // H* = -H: <Hf, g> + <f, Hg> = 0, checked through the adjoint under test.
    const double anti = max_abs_difference(apply(Hstar, g), -apply(H, g));
    worst_square = std::max(worst_square, sq);
    worst_parseval = std::max(worst_parseval, pars);
    worst_invol = std::max(worst_invol, inv);
    worst_anti = std::max(worst_anti, anti);
    out.record(sq <= 1e-9 && pars <= 1e-9 && inv <= 1e-9 && anti <= 1e-10);
  }
  out.details["hilbert_square_max"] = worst_square;
  out.details["parseval_max"] = worst_parseval;
  out.details["haar_involution_max"] = worst_invol;
  out.details["hilbert_antisymmetry_max"] = worst_anti;
  return out;
}

std::pair<SuiteResult, SuiteResult> suite_theorem1(const ExperimentConfig& cfg, GoldenStore& golden) {
  SuiteResult bounds{"theorem1"};
  SuiteResult level{"level_identity"};
  const CampaignResult run = run_theorem1(cfg);
  const Json& sm = run.summary;
  const std::size_t rows = sm["rows"].get<std::size_t>();
  bounds.total = rows;
  bounds.passed = rows - sm["failing_rows"].get<std::size_t>();
  bounds.details = sm;
  Json goldens = Json::object();
  for (const auto& [name, m] : sm["max"].items()) {
    for (const char* key : {"ratio_T", "long_range"}) {
      const std::string status = golden.check(fmt::format("theorem1.{}.{}_max", name, key), m[key].get<double>(),
                                              kGoldenRelTol);
      goldens[name][key] = status;
      bounds.record(status != "mismatch");
    }
  }
  bounds.details["golden"] = goldens;
  level.total = sm["level_identity_rows"].get<std::size_t>();
  level.passed = level.total - sm["violations"]["level_identity"].get<std::size_t>();
  level.details["max_rel_error"] = sm["level_identity_max_rel_error"];
  return {bounds, level};
}

std::pair<SuiteResult, SuiteResult> suite_theorem2(const ExperimentConfig& cfg, GoldenStore& golden) {
  SuiteResult main{"theorem2"};
  SuiteResult support{"support_mode"};
  const CampaignResult run = run_theorem2(cfg);
  const Json& sm = run.summary;
  main.total = sm["rows"].get<std::size_t>();
  main.passed = main.total - sm["failing_rows"].get<std::size_t>();
  main.details["campaign"] = sm;
  support.total = sm["support_rows"].get<std::size_t>();
  support.passed = support.total - sm["support_failing_rows"].get<std::size_t>();
  support.details["support_violations"] = sm["support_violations"];
  Json goldens = Json::object();
  for (const auto& [key, value] : sm["c_star_max"].items()) {
    // The bisection tolerance bounds how far c_star can move, so this is
    // compared at that tolerance rather than to rounding level.
    const std::string status = golden.check("theorem2." + key + ".c_star_max", value.get<double>(), cfg.dual_tol);
    goldens[key] = status;
    main.record(status != "mismatch");
  }
  main.details["golden"] = goldens;

  SolverOptions opts;
  opts.tol_feas = cfg.tol_feas;
  opts.max_iter = cfg.max_iter;
  {
    const auto inst = make_instance(GridFunction::constant(cfg.n, 2.0), LinearOperatorSpec::hilbert(cfg.n), 1.0,
                                    Exponent::finite(2.0));
    const DualResult d = min_constant(inst, cfg.dual_tol, opts);
    main.details["worked_instance"] = {{"c_star", d.c_star}, {"certified", d.certified}};
    main.record(d.certified && d.c_star <= 1.0);
  }

  // Verdict comparison with the penalty oracle at p = 2 on tiny grids. Test
  // constants are placed away from the threshold; pairs where either side
  // cannot decide are redrawn and counted. The "tight" family shrinks the
  // radius of the T* box below the box around f (t = -kappa r), the only
  // regime on these grids where the splitting iteration, rather than the
  // closed-form checks, decides the verdict.
  const Exponent two = Exponent::finite(2.0);
  const OperatorKind kinds[] = {OperatorKind::hilbert, OperatorKind::haar, OperatorKind::identity_minus_mean};
  const auto target = static_cast<std::size_t>(cfg.penalty_trials);
  Json oracle_details = Json::object();
  for (const bool tight : {false, true}) {
    Rng rng(cfg.seed ^ (tight ? 0x7197ULL : 0x9e7ULL));
    std::size_t agree = 0, disagree = 0, undecided = 0, drawn = 0, feasible_seen = 0;
    std::map<std::string, std::size_t> reasons;
    while (agree + disagree < target && drawn < 5 * target + 50) {
      ++drawn;
      const std::size_t n = rng.below(2) ? 8 : 4;
      const auto op = make_operator(kinds[rng.below(3)], n, rng.next());
      const bool supported = rng.below(4) == 0;
      const GridSet half = GridSet::cells_in(n, 0.0, 0.5);
      const auto E = supported ? std::optional<GridSet>(half) : std::nullopt;
      GridFunction f = random_function(n, rng);
      if (supported) f = mask(f, half);
      const double s = rng.uniform(0.2, 0.9) * norm(f, two);
      auto inst = make_instance(f, op, s, two, E);
      if (tight) inst.t = -rng.uniform(0.3, 0.8) * inst.r;
      const double c_ref = min_constant(inst, 1e-4, opts).c_star;
      const double factor = rng.below(2) ? rng.uniform(0.75, 0.97) : rng.uniform(1.03, 1.3);
      const double c = c_ref * factor;
      const FeasibilityOutcome mine = feasible(inst, c, opts);
      const oracle::PenaltyVerdict ref = oracle::penalty_feasibility(inst.f, inst.Tstar, inst.s, inst.r, inst.t, c, E);
      if (mine.status == FeasibilityStatus::inconclusive || ref.verdict == oracle::Verdict::ambiguous) {
        ++undecided;
        continue;
      }
      const bool a = mine.status == FeasibilityStatus::feasible;
      const bool b = ref.verdict == oracle::Verdict::feasible;
      feasible_seen += a;
      ++reasons[mine.reason];
      if (a == b) {
        ++agree;
      } else {
        ++disagree;
      }
    }
    oracle_details[tight ? "tight" : "standard"] = {{"agree", agree},
                                                    {"disagree", disagree},
                                                    {"undecided", undecided},
                                                    {"feasible_verdicts", feasible_seen},
                                                    {"verdict_reasons", reasons}};
    main.total += agree + disagree;
    main.passed += agree;
    // Too few decisive comparisons counts as a failure of the suite.
    main.record(agree + disagree >= target);
  }
  main.details["penalty_oracle"] = oracle_details;
  return {main, support};
}

SuiteResult suite_annihilation(const ExperimentConfig& cfg) {
  SuiteResult out{"annihilation"};
  Rng rng(cfg.seed ^ 0xa77ULL);
  const std::size_t n = cfg.n;
  double worst = 0.0;
  for (const auto& op : operator_zoo(n, cfg.seed)) {
    for (int k = 0; k < cfg.operator_probes; ++k) {
      const GridFunction g = random_function(n, rng), beta = random_function(n, rng);
      const GridPair x{g, apply(op, g)};
      const GridPair y{-apply(adjoint_under_test(cfg, op), beta), beta};
      const double v = std::fabs(duality_pairing(x, y));
      worst = std::max(worst, v);
      out.record(v <= 1e-9);
    }
  }
  out.details["max_abs_pairing"] = worst;
  return out;
}

SuiteResult suite_corollary(const ExperimentConfig& cfg, GoldenStore& golden) {
  SuiteResult out{"corollary"};
  const auto corpus = generate_corpus(cfg);
  const Exponent p = Exponent::finite(cfg.p);
  double step_f = 0.0, step_T = 0.0;
  std::size_t saturated = 0;
  for (auto kind : cfg.operators) {
    const auto op = make_operator(kind, cfg.n, cfg.seed + 0x5eed);
    for (const auto& entry : corpus) {
      const double fp = norm(entry.f, p);
      std::vector<double> s_list;
      for (double s = fp / 1024.0; s_list.empty() || s_list.back() < fp; s *= 2.0) s_list.push_back(s);
      s_list.push_back(2.0 * s_list.back());
      const auto terms = graph_approx_sequence(entry.f, op, s_list, p);
      const auto res = graph_residuals(entry.f, op, terms);
      bool pass = true;
      for (std::size_t k = 0; k < s_list.size(); ++k) {
        if (s_list[k] >= fp) {
          pass = pass && terms[k] == entry.f && res.residual_f[k] == 0.0 && res.residual_T[k] == 0.0;
          ++saturated;
        }
        if (k > 0) {
          if (res.residual_f[k - 1] > 0.0) step_f = std::max(step_f, res.residual_f[k] / res.residual_f[k - 1]);
          if (res.residual_T[k - 1] > 0.0) step_T = std::max(step_T, res.residual_T[k] / res.residual_T[k - 1]);
          pass = pass && std::isfinite(res.residual_f[k]) && std::isfinite(res.residual_T[k]);
        }
      }
      out.record(pass);
    }
  }
  // Growth factor between consecutive residuals, frozen as the regression
  // constant that "nonincreasing up to a constant" is measured against.
  const std::string sf = golden.check("corollary.residual_f_step_max", step_f, kGoldenRelTol);
  const std::string sT = golden.check("corollary.residual_T_step_max", step_T, kGoldenRelTol);
  out.record(sf != "mismatch");
  out.record(sT != "mismatch");
  out.details = {{"residual_f_step_max", step_f},
                 {"residual_T_step_max", step_T},
                 {"saturated_terms", saturated},
                 {"golden", {{"residual_f_step_max", sf}, {"residual_T_step_max", sT}}}};
  return out;
}

VerifyResult verify_all(const ExperimentConfig& cfg, const std::filesystem::path& golden_directory) {
  GoldenStore golden(golden_directory / "constants.json", config_fingerprint(cfg), cfg.update_golden);
  std::vector<SuiteResult> suites;
  suites.push_back(suite_distance_oracle(cfg));
  suites.push_back(suite_cz(cfg));
  suites.push_back(suite_operators(cfg));
  auto [t1, level] = suite_theorem1(cfg, golden);
  suites.push_back(std::move(t1));
  suites.push_back(std::move(level));
  auto [t2, support] = suite_theorem2(cfg, golden);
  suites.push_back(std::move(t2));
  suites.push_back(std::move(support));
  suites.push_back(suite_annihilation(cfg));
  suites.push_back(suite_corollary(cfg, golden));
  // A corrupted run must never freeze its numbers as regression values.
  if (!cfg.corrupt_adjoint) golden.save();

  VerifyResult out;
  Json js = Json::object();
  for (const auto& s : suites) {
    js[s.name] = {{"passed", s.passed}, {"total", s.total}, {"ok", s.ok()}, {"details", s.details}};
    out.ok = out.ok && s.ok();
  }
  out.summary = {{"schema", 1},
                 {"config_fingerprint", config_fingerprint(cfg)},
                 {"seed", cfg.seed},
                 {"ok", out.ok},
                 {"suites", js}};
  return out;
}

}  // namespace stablab::harness
