#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "stablab/cz.hpp"
#include "stablab/distance.hpp"
#include "stablab/dual_search.hpp"
#include "stablab/harness.hpp"
#include "stablab/serialize.hpp"
#include "stablab/stability.hpp"

using namespace stablab;
using harness::format_double;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<double> p;
  double s = 1.0;
  std::string op = "hilbert";
  std::string support = "none";
  std::string out = "json";
  std::string input;
  std::string ambient = "1";
  double level = 1.0;
  std::string kind = "theorem1";
  bool update_golden = false;
};

harness::ExperimentConfig make_config(const Options& o) {
  harness::ExperimentConfig cfg = o.config.empty() ? harness::ExperimentConfig{} : harness::load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.n) cfg.n = *o.n;
  if (o.p) cfg.p = *o.p;
  if (o.update_golden) cfg.update_golden = true;
  return cfg;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return Json::parse(in);
}

// --input file, or the first mixture function of the seeded corpus.
GridFunction input_function(const Options& o, const harness::ExperimentConfig& cfg) {
  if (!o.input.empty()) return grid_function_from_json(read_json(o.input));
  harness::ExperimentConfig c = cfg;
  c.corpus = {{"mixture", 1}};
  return harness::generate_corpus(c).front().f;
}

std::optional<GridSet> support_set(const Options& o, std::size_t n) {
  if (o.support == "none") return std::nullopt;
  if (o.support == "half") return GridSet::cells_in(n, 0.0, 0.5);
  return grid_set_from_json(read_json(o.support));
}

LinearOperatorSpec make_op(const Options& o, const harness::ExperimentConfig& cfg, std::size_t n) {
  return harness::make_operator(parse_operator_kind(o.op), n, cfg.seed + 0x5eed);
}

void emit(const Options& o, const Json& j) {
  if (o.out == "json") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  // One header row and one value row of the flat scalar fields.
  std::cout << fmt::format("# stablab-csv schema={} kind=record\n", harness::kCsvSchemaVersion);
  std::string keys, vals;
  for (const auto& [k, v] : j.items()) {
    if (v.is_structured()) continue;
    keys += (keys.empty() ? "" : ",") + k;
    vals += (vals.empty() ? "" : ",") + (v.is_number() ? format_double(v.get<double>()) : (v.is_string() ? v.get<std::string>() : v.dump()));
  }
  std::cout << keys << '\n' << vals << '\n';
}

int cmd_distance(const Options& o) {
  const auto cfg = make_config(o);
  const GridFunction f = input_function(o, cfg);
  const DistanceResult r = distance(f, o.s, Exponent::finite(cfg.p), Exponent::parse(o.ambient));
  Json j = to_json(r);
  if (o.out == "json") j["minimizer"] = to_json(r.minimizer);
  emit(o, j);
  return 0;
}

int cmd_cz(const Options& o) {
  const auto cfg = make_config(o);
  const GridFunction f = input_function(o, cfg);
  const CzDecomposition d = cz_decompose(f, o.level, cfg.dilation_factor);
  const CzCheckReport rep = verify_cz(d, f, {cfg.p});
  Json j = to_json(d);
  j["cube_count"] = d.cubes.size();
  j["omega_measure"] = d.omega.measure();
  j["checks_ok"] = rep.all_ok();
  if (o.out == "json") {
    j["good"] = to_json(d.good);
    j["bad"] = to_json(d.bad);
  }
  emit(o, j);
  return rep.all_ok() ? 0 : 1;
}

int cmd_construct(const Options& o) {
  const auto cfg = make_config(o);
  const GridFunction f = input_function(o, cfg);
  const auto res = bourgain_construct(f, make_op(o, cfg, f.size()), o.s, Exponent::finite(cfg.p));
  Json j = to_json(res.report);
  if (o.out == "json") j["u"] = to_json(res.u);
  emit(o, j);
  return 0;
}

int cmd_redecompose(const Options& o) {
  const auto cfg = make_config(o);
  const GridFunction u = input_function(o, cfg);
  const auto op = make_op(o, cfg, u.size());
  const Exponent p = Exponent::finite(cfg.p);
  // Ambient split from the L^1 near-minimizers of u and Tu.
  const GridFunction Tu = apply(op, u);
  const GridFunction u1 = near_minimizer(u, o.s, p, Exponent::one());
  const GridFunction v1 = near_minimizer(Tu, o.s, p, Exponent::one());
  const AmbientSplit split{u - u1, Tu - v1, u1, v1};
  emit(o, to_json(kclosed_redecompose(u, op, split, p)));
  return 0;
}

int cmd_dual(const Options& o) {
  const auto cfg = make_config(o);
  GridFunction f = input_function(o, cfg);
  const auto E = support_set(o, f.size());
  if (E && o.input.empty()) f = harness::compress_to_left_half(f);
  const DualInstance inst = make_instance(f, make_op(o, cfg, f.size()), o.s, Exponent::finite(cfg.p), E);
  SolverOptions opts;
  opts.tol_feas = cfg.tol_feas;
  opts.max_iter = cfg.max_iter;
  const DualResult d = min_constant(inst, cfg.dual_tol, opts);
  Json j = to_json(d);
  j["r"] = inst.r;
  j["t"] = inst.t;
  if (o.out == "json") {
    j["v"] = to_json(d.v);
  } else {
    j["p_ratio"] = d.residuals.p_ratio;
    j["f_ratio"] = d.residuals.f_ratio;
    j["T_ratio"] = d.residuals.T_ratio;
  }
  emit(o, j);
  return d.certified ? 0 : 1;
}

int cmd_verify(const Options& o) {
  const auto cfg = make_config(o);
  const auto res = harness::verify_all(cfg, harness::golden_dir());
  std::cout << res.summary.dump(2) << '\n';
  return res.ok ? 0 : 1;
}

int cmd_report(const Options& o) {
  const auto cfg = make_config(o);
  if (o.kind != "theorem1" && o.kind != "theorem2") throw std::runtime_error("--kind must be theorem1 or theorem2");
  const auto run = o.kind == "theorem1" ? harness::run_theorem1(cfg) : harness::run_theorem2(cfg);
  if (o.out == "csv") {
    std::cout << run.csv;
    std::cerr << run.summary.dump(2) << '\n';
  } else {
    std::cout << run.summary.dump(2) << '\n';
  }
  return run.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable near-minimizer laboratory"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "RNG seed");
  app.add_option("--n", o.n, "grid size (power of two)");
  app.add_option("--p", o.p, "L^p exponent (> 1)");
  app.add_option("--s", o.s, "ball radius");
  app.add_option("--operator", o.op, "hilbert, haar or identity_minus_mean");
  app.add_option("--support", o.support, "none, half, or a JSON 0/1 array file");
  app.add_option("--out", o.out, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--input", o.input, "JSON array with the grid function");

  auto* distance_cmd = app.add_subcommand("distance", "distance from f to the L^p ball");
  distance_cmd->add_option("--ambient", o.ambient, "1 or inf");
  auto* cz_cmd = app.add_subcommand("cz", "Calderon-Zygmund decomposition");
  cz_cmd->add_option("--lambda", o.level, "CZ level");
  app.add_subcommand("construct", "stable near-minimizer for (L^1, L^p)");
  app.add_subcommand("redecompose", "K-closed redecomposition of (u, Tu)");
  app.add_subcommand("dual", "smallest constant for (L^inf, L^p)");
  auto* verify_cmd = app.add_subcommand("verify", "run every invariant suite");
  verify_cmd->add_flag("--update-golden", o.update_golden, "overwrite frozen regression constants");
  auto* report_cmd = app.add_subcommand("report", "campaign CSV");
  report_cmd->add_option("--kind", o.kind, "theorem1 or theorem2");
  report_cmd->add_flag("--update-golden", o.update_golden, "accepted for symmetry with verify");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (o.out == "json" && app.got_subcommand("report") && app.count("--out") == 0) o.out = "csv";
  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "distance") return cmd_distance(o);
    if (name == "cz") return cmd_cz(o);
    if (name == "construct") return cmd_construct(o);
    if (name == "redecompose") return cmd_redecompose(o);
    if (name == "dual") return cmd_dual(o);
    if (name == "verify") return cmd_verify(o);
    return cmd_report(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
