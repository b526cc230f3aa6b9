#pragma once

// Experiment configuration, corpus generation, the two construction
// campaigns and the full verification run.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stablab/grid.hpp"
#include "stablab/operators.hpp"
#include "stablab/serialize.hpp"

namespace stablab::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kCsvSchemaVersion = 1;

struct Sweep {
  double min = 0.25;
  double max = 64.0;
  int count = 20;
  bool log = true;
};

std::vector<double> sweep_values(const Sweep& sweep);

struct FamilyCount {
  std::string family;  // spikes, steps, smooth, mixture
  int count = 0;
};

enum class SupportMode { none, half, both };

struct ExperimentConfig {
  std::uint64_t seed = 20240501;
  std::size_t n = 256;
  double p = 2.0;
  std::vector<OperatorKind> operators{OperatorKind::hilbert, OperatorKind::haar, OperatorKind::identity_minus_mean};
  Sweep s_sweep;
  std::vector<FamilyCount> corpus{{"spikes", 8}, {"steps", 8}, {"smooth", 8}, {"mixture", 8}};
  double dilation_factor = 10.0;

  // Dual (L^inf, L^p) campaign.
  std::vector<OperatorKind> dual_operators{OperatorKind::hilbert, OperatorKind::haar};
  Sweep dual_s_sweep{0.5, 8.0, 3, true};
  SupportMode support = SupportMode::both;
  double dual_tol = 1e-3;
  double tol_feas = 1e-7;
  int max_iter = 10000;

  // verify_all.
  int distance_trials = 200;
  int cz_trials = 1000;
  int operator_probes = 100;
  int penalty_trials = 100;
  bool corrupt_adjoint = false;
  bool update_golden = false;

  int threads = 0;  // 0: hardware concurrency
};

ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
Json to_json(const ExperimentConfig& cfg);

struct CorpusEntry {
  std::string family;
  GridFunction f;
};

// Deterministic in cfg.seed; every function has unit L^1 norm.
std::vector<CorpusEntry> generate_corpus(const ExperimentConfig& cfg);

// Haar signs are drawn from the seed.
LinearOperatorSpec make_operator(OperatorKind kind, std::size_t n, std::uint64_t seed);

// f compressed into [0, 1/2): cells 2i and 2i+1 are merged into cell i.
GridFunction compress_to_left_half(const GridFunction& f);

struct CampaignResult {
  std::string csv;
  Json summary;
  bool ok = true;
};

CampaignResult run_theorem1(const ExperimentConfig& cfg);
CampaignResult run_theorem2(const ExperimentConfig& cfg);

std::filesystem::path golden_dir();

// Frozen empirical constants, keyed by a fingerprint of the config that
// produced them. Missing entries are frozen on first use; existing ones are
// only overwritten when update is set.
class GoldenStore {
 public:
  GoldenStore(std::filesystem::path file, std::string fingerprint, bool update);
  // "match", "frozen", "updated" or "mismatch".
  std::string check(const std::string& key, double value, double rel_tol = 1e-9);
  std::optional<double> get(const std::string& key) const;
  void save() const;

 private:
  std::filesystem::path file_;
  std::string fingerprint_;
  bool update_;
  bool dirty_ = false;
  Json data_;
};

std::string config_fingerprint(const ExperimentConfig& cfg);

struct SuiteResult {
  std::string name;
  std::size_t passed = 0;
  std::size_t total = 0;
  Json details = Json::object();
  bool ok() const { return passed == total; }
  void record(bool pass) {
    ++total;
    if (pass) ++passed;
  }
};

SuiteResult suite_distance_oracle(const ExperimentConfig& cfg);
SuiteResult suite_cz(const ExperimentConfig& cfg);
SuiteResult suite_operators(const ExperimentConfig& cfg);
// (L^1, L^p) construction bounds plus golden ratio_T maxima; the second result is the
// level identity over the same runs.
std::pair<SuiteResult, SuiteResult> suite_theorem1(const ExperimentConfig& cfg, GoldenStore& golden);
// Dual witness certification, the worked instance and the penalty oracle; the
// second result covers the support-mode rows.
std::pair<SuiteResult, SuiteResult> suite_theorem2(const ExperimentConfig& cfg, GoldenStore& golden);
SuiteResult suite_annihilation(const ExperimentConfig& cfg);
SuiteResult suite_corollary(const ExperimentConfig& cfg, GoldenStore& golden);

struct VerifyResult {
  Json summary;
  bool ok = true;
};

VerifyResult verify_all(const ExperimentConfig& cfg, const std::filesystem::path& golden);

// Runs body(i) for i in [0, count) on worker threads. Each index owns its own
// output slot, so results merge in index order regardless of scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

std::string format_double(double v);

}  // namespace stablab::harness
