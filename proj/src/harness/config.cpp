#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "stablab/harness.hpp"

namespace stablab::harness {
namespace {

const std::set<std::string> kFamilies{"spikes", "steps", "smooth", "mixture"};

void require_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(fmt::format("unknown key '{}' in {}", key, where));
  }
}

Sweep sweep_from_json(const Json& j, Sweep out, const std::string& where) {
  require_keys(j, {"min", "max", "count", "log"}, where);
  out.min = j.value("min", out.min);
  out.max = j.value("max", out.max);
  out.count = j.value("count", out.count);
  out.log = j.value("log", out.log);
  if (!(out.min > 0.0) || !(out.max >= out.min) || out.count < 0) {
    throw ConfigError(where + " needs 0 < min <= max and count >= 0");
  }
  return out;
}

Json sweep_to_json(const Sweep& s) { return {{"min", s.min}, {"max", s.max}, {"count", s.count}, {"log", s.log}}; }

std::vector<OperatorKind> kinds_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be an array of operator names");
  std::vector<OperatorKind> out;
  for (const auto& x : j) {
    try {
      out.push_back(parse_operator_kind(x.get<std::string>()));
    } catch (const std::exception& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return out;
}

Json kinds_to_json(const std::vector<OperatorKind>& kinds) {
  Json j = Json::array();
  for (auto k : kinds) j.push_back(to_string(k));
  return j;
}

std::string support_name(SupportMode m) {
  switch (m) {
    case SupportMode::none:
      return "none";
    case SupportMode::half:
      return "half";
    case SupportMode::both:
      return "both";
  }
  return "none";
}

SupportMode parse_support(const std::string& s) {
  if (s == "none") return SupportMode::none;
  if (s == "half") return SupportMode::half;
  if (s == "both") return SupportMode::both;
  throw ConfigError("support must be none, half or both");
}

}  // namespace

std::vector<double> sweep_values(const Sweep& sweep) {
  std::vector<double> out;
  if (sweep.count <= 0) return out;
  if (sweep.count == 1) return {sweep.min};
  for (int i = 0; i < sweep.count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(sweep.count - 1);
    out.push_back(sweep.log ? std::exp(std::log(sweep.min) + t * (std::log(sweep.max) - std::log(sweep.min)))
                            : sweep.min + t * (sweep.max - sweep.min));
  }
  out.back() = sweep.max;
  return out;
}

ExperimentConfig config_from_json(const Json& j) {
  require_keys(j,
               {"seed", "n", "p", "operators", "s_sweep", "corpus", "dilation_factor", "dual", "verify",
                "update_golden", "threads"},
               "config");
  ExperimentConfig cfg;
  try {
    cfg.seed = j.value("seed", cfg.seed);
    cfg.n = j.value("n", cfg.n);
    cfg.p = j.value("p", cfg.p);
    cfg.dilation_factor = j.value("dilation_factor", cfg.dilation_factor);
    cfg.update_golden = j.value("update_golden", cfg.update_golden);
    cfg.threads = j.value("threads", cfg.threads);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  if (!is_power_of_two(cfg.n) || cfg.n < 2) throw ConfigError("n must be a power of two >= 2");
  if (!(cfg.p > 1.0) || !std::isfinite(cfg.p)) throw ConfigError("p must be a finite exponent > 1");
  if (!(cfg.dilation_factor >= 1.0)) throw ConfigError("dilation_factor must be >= 1");
  if (j.contains("operators")) cfg.operators = kinds_from_json(j["operators"], "operators");
  if (j.contains("s_sweep")) cfg.s_sweep = sweep_from_json(j["s_sweep"], cfg.s_sweep, "s_sweep");
  if (j.contains("corpus")) {
    if (!j["corpus"].is_array()) throw ConfigError("corpus must be an array");
    cfg.corpus.clear();
    for (const auto& e : j["corpus"]) {
      require_keys(e, {"family", "count"}, "corpus entry");
      FamilyCount fc{e.value("family", std::string()), e.value("count", 0)};
      if (!kFamilies.count(fc.family)) throw ConfigError(fmt::format("invalid corpus family '{}'", fc.family));
      if (fc.count < 0) throw ConfigError("corpus count must be >= 0");
      cfg.corpus.push_back(fc);
    }
  }
  if (j.contains("dual")) {
    const Json& d = j["dual"];
    require_keys(d, {"operators", "s_sweep", "support", "tol", "tol_feas", "max_iter"}, "dual");
    if (d.contains("operators")) cfg.dual_operators = kinds_from_json(d["operators"], "dual.operators");
    if (d.contains("s_sweep")) cfg.dual_s_sweep = sweep_from_json(d["s_sweep"], cfg.dual_s_sweep, "dual.s_sweep");
    if (d.contains("support")) cfg.support = parse_support(d["support"].get<std::string>());
    cfg.dual_tol = d.value("tol", cfg.dual_tol);
    cfg.tol_feas = d.value("tol_feas", cfg.tol_feas);
    cfg.max_iter = d.value("max_iter", cfg.max_iter);
    if (!(cfg.dual_tol > 0.0) || !(cfg.tol_feas > 0.0) || cfg.max_iter < 1) {
      throw ConfigError("dual tolerances must be positive and max_iter >= 1");
    }
  }
  if (j.contains("verify")) {
    const Json& v = j["verify"];
    require_keys(v, {"distance_trials", "cz_trials", "operator_probes", "penalty_trials", "corrupt_adjoint"},
                 "verify");
    cfg.distance_trials = v.value("distance_trials", cfg.distance_trials);
    cfg.cz_trials = v.value("cz_trials", cfg.cz_trials);
    cfg.operator_probes = v.value("operator_probes", cfg.operator_probes);
    cfg.penalty_trials = v.value("penalty_trials", cfg.penalty_trials);
    cfg.corrupt_adjoint = v.value("corrupt_adjoint", cfg.corrupt_adjoint);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

Json to_json(const ExperimentConfig& cfg) {
  Json corpus = Json::array();
  for (const auto& fc : cfg.corpus) corpus.push_back({{"family", fc.family}, {"count", fc.count}});
  return {{"seed", cfg.seed},
          {"n", cfg.n},
          {"p", cfg.p},
          {"operators", kinds_to_json(cfg.operators)},
          {"s_sweep", sweep_to_json(cfg.s_sweep)},
          {"corpus", corpus},
          {"dilation_factor", cfg.dilation_factor},
          {"dual",
           {{"operators", kinds_to_json(cfg.dual_operators)},
            {"s_sweep", sweep_to_json(cfg.dual_s_sweep)},
            {"support", support_name(cfg.support)},
            {"tol", cfg.dual_tol},
            {"tol_feas", cfg.tol_feas},
            {"max_iter", cfg.max_iter}}},
          {"verify",
           {{"distance_trials", cfg.distance_trials},
            {"cz_trials", cfg.cz_trials},
            {"operator_probes", cfg.operator_probes},
            {"penalty_trials", cfg.penalty_trials},
            {"corrupt_adjoint", cfg.corrupt_adjoint}}},
          {"update_golden", cfg.update_golden},
          {"threads", cfg.threads}};
}

std::filesystem::path golden_dir() {
  if (const char* env = std::getenv("STABLAB_GOLDEN_DIR"); env != nullptr && *env != '\0') return env;
  return STABLAB_GOLDEN_DIR_DEFAULT;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

}  // namespace stablab::harness
