#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "stablab/harness.hpp"

using namespace stablab;
using namespace stablab::harness;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> rows_of(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

// Numeric cells compared at relative 1e-9, everything else exactly.
void compare_csv(const std::string& got, const std::string& want) {
  const auto a = rows_of(got), b = rows_of(want);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].size() == b[i].size());
    for (std::size_t k = 0; k < a[i].size(); ++k) {
      char* end = nullptr;
      const double x = std::strtod(b[i][k].c_str(), &end);
      if (i < 2 || *end != '\0' || b[i][k].empty()) {
        CHECK(a[i][k] == b[i][k]);
        continue;
      }
      const double y = std::strtod(a[i][k].c_str(), nullptr);
      if (std::isnan(x)) {
        CHECK(std::isnan(y));
      } else {
        INFO("row " << i << " col " << k);
        CHECK(std::fabs(x - y) <= 1e-9 * std::max({std::fabs(x), std::fabs(y), 1e-300}));
      }
    }
  }
}

ExperimentConfig smoke() { return load_config(fs::path(STABLAB_SOURCE_DIR) / "configs" / "smoke.json"); }

fs::path scratch_golden(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("stablab_" + name + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path src = golden_dir() / "constants.json";
  if (fs::exists(src)) fs::copy_file(src, dir / "constants.json");
  return dir;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = smoke();
  CHECK(cfg.seed == 7);
  CHECK(cfg.n == 64);
  CHECK(config_from_json(to_json(cfg)).seed == cfg.seed);
  CHECK(to_json(config_from_json(to_json(cfg))) == to_json(cfg));
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"corpus":[{"family":"noise","count":2}]})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"bogus":1})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"n":12})")), ConfigError);
}

TEST_CASE("sweeps") {
  const auto v = sweep_values({0.25, 64.0, 9, true});
  REQUIRE(v.size() == 9);
  CHECK(v.front() == 0.25);
  CHECK(v.back() == doctest::Approx(64.0));
  CHECK(v[1] == doctest::Approx(0.5));
  CHECK(sweep_values({1.0, 3.0, 3, false})[1] == doctest::Approx(2.0));
}

TEST_CASE("corpus determinism and shape") {
  ExperimentConfig cfg;
  cfg.n = 8;
  const auto a = generate_corpus(cfg), b = generate_corpus(cfg);
  REQUIRE(a.size() == 32);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].f == b[i].f);
    CHECK(norm(a[i].f, Exponent::one()) == doctest::Approx(1.0).epsilon(1e-12));
    if (a[i].family == "spikes") {
      std::size_t nz = 0;
      for (double x : a[i].f.values()) nz += x != 0.0;
      CHECK(nz <= 3);
    }
  }
  cfg.seed += 1;
  CHECK_FALSE(generate_corpus(cfg)[0].f == a[0].f);
  cfg.corpus = {{"spikes", 0}};
  CHECK(generate_corpus(cfg).empty());
  const auto run = run_theorem1(cfg);
  CHECK(run.csv.find('\n') == run.csv.find("kind=theorem1") + 13);
  CHECK(rows_of(run.csv).size() == 2);
  CHECK(run.ok);
}

TEST_CASE("support compression") {
  const GridFunction f({1.0, 2.0, 3.0, 4.0});
  const auto g = compress_to_left_half(f);
  CHECK(g == GridFunction({3.0, 7.0, 0.0, 0.0}));
  CHECK(norm(g, Exponent::one()) == norm(f, Exponent::one()));
}

TEST_CASE("campaign CSVs are deterministic and match the frozen smoke output") {
  auto cfg = smoke();
  const auto t1 = run_theorem1(cfg);
  cfg.threads = 3;
  const auto t1b = run_theorem1(cfg);
  CHECK(t1.csv == t1b.csv);
  CHECK(t1.ok);
  CHECK(t1.csv.rfind("# stablab-csv schema=1 kind=theorem1\n", 0) == 0);
  const auto t2 = run_theorem2(cfg);
  CHECK(t2.ok);
  CHECK(t2.summary.at("uncertified") == 0);
  for (const auto& [name, run] : {std::pair{"theorem1", t1}, std::pair{"theorem2", t2}}) {
    const fs::path file = golden_dir() / ("smoke_" + std::string(name) + ".csv");
    REQUIRE_MESSAGE(fs::exists(file), file.string());
    compare_csv(run.csv, read_file(file));
  }
}

TEST_CASE("golden store statuses") {
  const fs::path dir = scratch_golden("store");
  {
    GoldenStore g(dir / "c.json", "abc", false);
    CHECK(g.check("x", 1.0) == "frozen");
    CHECK(g.check("x", 1.0 + 1e-12) == "match");
    CHECK(g.check("x", 1.1) == "mismatch");
    g.save();
  }
  {
    GoldenStore g(dir / "c.json", "abc", false);
    CHECK(g.get("x") == 1.0);
    CHECK_FALSE(g.get("y").has_value());
  }
  GoldenStore u(dir / "c.json", "abc", true);
  CHECK(u.check("x", 2.0) == "updated");
  GoldenStore other(dir / "c.json", "def", false);
  CHECK_FALSE(other.get("x").has_value());
  ExperimentConfig a, b;
  b.threads = 4;
  b.update_golden = true;
  b.corrupt_adjoint = true;
  CHECK(config_fingerprint(a) == config_fingerprint(b));
  b.seed += 1;
  CHECK(config_fingerprint(a) != config_fingerprint(b));
  fs::remove_all(dir);
}

TEST_CASE("verify on the smoke config") {
  const fs::path dir = scratch_golden("verify");
  auto cfg = smoke();
  const auto res = verify_all(cfg, dir);
  CHECK(res.ok);
  for (const auto& [name, s] : res.summary.at("suites").items()) {
    INFO(name);
    CHECK(s.at("ok").get<bool>());
    CHECK(s.at("total").get<int>() > 0);
  }
  CHECK(res.summary.at("config_fingerprint") == config_fingerprint(cfg));
  // Second run reads back the constants frozen by the first.
  const auto again = verify_all(cfg, dir);
  CHECK(again.ok);
  CHECK(again.summary.at("suites").at("corollary").at("details").at("golden").at("residual_f_step_max") == "match");

  cfg.corrupt_adjoint = true;
  const auto bad = verify_all(cfg, dir);
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.summary.at("suites").at("operators").at("ok").get<bool>());
  CHECK_FALSE(bad.summary.at("suites").at("annihilation").at("ok").get<bool>());
  fs::remove_all(dir);
}

TEST_CASE("parallel_for") {
  std::vector<int> hit(1000, 0);
  parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 2, [](std::size_t i) {
                    if (i == 3) throw std::runtime_error("x");
                  }),
                  std::runtime_error);
  CHECK(format_double(0.1) == "0.10000000000000001");
}
