#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "stablab/harness.hpp"
#include "stablab/random.hpp"

namespace stablab::harness {
namespace {

std::vector<double> spikes(std::size_t n, Rng& rng) {
  std::vector<double> v(n, 0.0);
  const std::size_t k = 1 + rng.below(3);
  for (std::size_t i = 0; i < k; ++i) v[rng.below(n)] += rng.sign() * rng.uniform(1.0, 10.0);
  return v;
}

std::vector<double> steps(std::size_t n, Rng& rng) {
  const int max_level = std::min(5, std::countr_zero(n));
  const int level = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_level)));
  const std::size_t pieces = std::size_t{1} << level;
  const std::size_t width = n / pieces;
  std::vector<double> v(n);
  for (std::size_t q = 0; q < pieces; ++q) {
    const double h = rng.normal();
    std::fill(v.begin() + static_cast<std::ptrdiff_t>(q * width), v.begin() + static_cast<std::ptrdiff_t>((q + 1) * width), h);
  }
  return v;
}

// Trigonometric polynomial below the Nyquist frequency.
std::vector<double> smooth(std::size_t n, Rng& rng) {
  const std::size_t top = std::max<std::size_t>(1, std::min<std::size_t>(8, n / 4));
  const std::size_t modes = 1 + rng.below(top);
  std::vector<double> a(modes + 1), b(modes + 1);
  for (std::size_t k = 0; k <= modes; ++k) {
    a[k] = rng.normal() / static_cast<double>(k + 1);
    b[k] = rng.normal() / static_cast<double>(k + 1);
  }
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n);
    double acc = a[0];
    for (std::size_t k = 1; k <= modes; ++k) {
      const double w = 2.0 * std::numbers::pi * static_cast<double>(k) * x;
      acc += a[k] * std::cos(w) + b[k] * std::sin(w);
    }
    v[i] = acc;
  }
  return v;
}

std::vector<double> draw(const std::string& family, std::size_t n, Rng& rng) {
  if (family == "spikes") return spikes(n, rng);
  if (family == "steps") return steps(n, rng);
  if (family == "smooth") return smooth(n, rng);
  if (family == "mixture") {
    auto v = smooth(n, rng);
    const auto s = spikes(n, rng);
    for (std::size_t i = 0; i < n; ++i) v[i] += static_cast<double>(n) / 16.0 * s[i];
    return v;
  }
  throw ConfigError("invalid corpus family '" + family + "'");
}

}  // namespace

std::vector<CorpusEntry> generate_corpus(const ExperimentConfig& cfg) {
  require_grid_size(cfg.n);
  std::vector<CorpusEntry> out;
  for (std::size_t fam = 0; fam < cfg.corpus.size(); ++fam) {
    const auto& fc = cfg.corpus[fam];
    Rng rng(cfg.seed * 1000003ULL + fam);
    for (int i = 0; i < fc.count; ++i) {
      std::vector<double> v;
      double mass = 0.0;
      while (!(mass > 0.0)) {
        v = draw(fc.family, cfg.n, rng);
        mass = 0.0;
        for (double x : v) mass += std::fabs(x);
        mass /= static_cast<double>(cfg.n);
      }
      for (double& x : v) x /= mass;
      out.push_back({fc.family, GridFunction(std::move(v))});
    }
  }
  return out;
}

LinearOperatorSpec make_operator(OperatorKind kind, std::size_t n, std::uint64_t seed) {
  switch (kind) {
    case OperatorKind::hilbert:
      return LinearOperatorSpec::hilbert(n);
    case OperatorKind::haar:
      return LinearOperatorSpec::haar_random(n, seed);
    case OperatorKind::identity_minus_mean:
      return LinearOperatorSpec::identity_minus_mean(n);
  }
  throw ConfigError("unknown operator kind");
}

GridFunction compress_to_left_half(const GridFunction& f) {
  const std::size_t n = f.size();
  std::vector<double> v(n, 0.0);
  for (std::size_t i = 0; i < n / 2; ++i) v[i] = f[2 * i] + f[2 * i + 1];
  return GridFunction(std::move(v));
}

}  // namespace stablab::harness
