#include <cmath>
#include <numbers>

#include "doctest.h"
#include "stablab/cz.hpp"
#include "stablab/operators.hpp"
#include "stablab/random.hpp"

using namespace stablab;

namespace {

GridFunction random_function(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return GridFunction(std::move(v));
}

GridFunction centered(const GridFunction& f) { return f - GridFunction::constant(f.size(), mean(f)); }

// Component of f along the alternating sign pattern.
GridFunction nyquist_part(const GridFunction& f) {
  const std::size_t n = f.size();
  double a = 0.0;
  for (std::size_t i = 0; i < n; ++i) a += (i % 2 ? -1.0 : 1.0) * f[i];
  a /= static_cast<double>(n);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (i % 2 ? -1.0 : 1.0) * a;
  return GridFunction(std::move(v));
}

std::vector<LinearOperatorSpec> zoo(std::size_t n) {
  const GridSet half = GridSet::cells_in(n, 0.0, 0.5);
  return {LinearOperatorSpec::hilbert(n),
          LinearOperatorSpec::haar_uniform(n),
          LinearOperatorSpec::haar_random(n, 99),
          LinearOperatorSpec::identity_minus_mean(n),
          LinearOperatorSpec::hilbert(n).restricted_to(half),
          LinearOperatorSpec::haar_random(n, 5).restricted_to(half),
          adjoint(LinearOperatorSpec::hilbert(n).restricted_to(half))};
}

GridFunction dipole(std::size_t n, int level) {
  const std::size_t width = n >> level;
  std::vector<double> v(n, 0.0);
  for (std::size_t i = 0; i < width; ++i) v[i] = i < width / 2 ? 1.0 : -1.0;
  return GridFunction(std::move(v));
}

}  // namespace

TEST_CASE("conjugate function of trigonometric modes") {
  for (std::size_t n : {8u, 64u, 256u}) {
    for (std::size_t k = 1; k < n / 2; ++k) {
      const double w = 2.0 * std::numbers::pi * static_cast<double>(k);
      const auto c = GridFunction::sample(n, [&](double x) { return std::cos(w * x); });
      const auto s = GridFunction::sample(n, [&](double x) { return std::sin(w * x); });
      CHECK(max_abs_difference(hilbert_transform(c), s) <= 1e-10);
      CHECK(max_abs_difference(hilbert_transform(s), -c) <= 1e-10);
    }
    CHECK(norm(hilbert_transform(GridFunction::constant(n, 3.5)), Exponent::infinity()) <= 1e-14);
    // The Nyquist mode is sent to zero.
    const auto alt = GridFunction::sample(n, [&](double x) { return std::cos(std::numbers::pi * n * x); });
    CHECK(norm(hilbert_transform(alt), Exponent::infinity()) <= 1e-12);
  }
}

TEST_CASE("haar transform with all signs +1 removes the mean") {
  Rng rng(1);
  for (std::size_t n : {2u, 4u, 32u, 256u}) {
    const auto f = random_function(n, rng);
    CHECK(max_abs_difference(apply(LinearOperatorSpec::haar_uniform(n), f), centered(f)) <= 1e-12);
    CHECK(max_abs_difference(apply(LinearOperatorSpec::identity_minus_mean(n), f), centered(f)) <= 1e-12);
  }
}

TEST_CASE("haar signs act on single wavelets") {
  // Sign of the root wavelet flipped: the n = 2 transform negates f - mean.
  const auto op = LinearOperatorSpec::haar(2, {-1});
  CHECK(max_abs_difference(apply(op, GridFunction({3.0, 1.0})), GridFunction({-1.0, 1.0})) <= 1e-15);
  CHECK_THROWS_AS(LinearOperatorSpec::haar(4, {1, 1}), DimensionError);
  CHECK_THROWS_AS(LinearOperatorSpec::haar(4, {1, 0, 1}), DomainError);
}

TEST_CASE("linearity and adjoint pairing") {
  Rng rng(2);
  for (std::size_t n : {8u, 256u}) {
    for (const auto& op : zoo(n)) {
      const auto star = adjoint(op);
      for (int t = 0; t < 100; ++t) {
        const auto f = random_function(n, rng), g = random_function(n, rng);
        const double a = rng.normal(), b = rng.normal();
        CHECK(max_abs_difference(apply(op, a * f + b * g), a * apply(op, f) + b * apply(op, g)) <= 1e-10);
        CHECK(std::fabs(inner(apply(op, f), g) - inner(f, apply(star, g))) <= 1e-10);
        CHECK(max_abs_difference(apply(adjoint(star), f), apply(op, f)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("adjoint rules") {
  Rng rng(3);
  const std::size_t n = 64;
  const GridSet E = GridSet::cells_in(n, 0.25, 0.75);
  const auto H = LinearOperatorSpec::hilbert(n);
  for (int t = 0; t < 50; ++t) {
    const auto f = random_function(n, rng), g = random_function(n, rng);
    CHECK(std::fabs(inner(apply(H, f), g) + inner(f, apply(H, g))) <= 1e-10);
    CHECK(max_abs_difference(apply(adjoint(H), f), -apply(H, f)) <= 1e-14);
    const auto haar = LinearOperatorSpec::haar_random(n, 4);
    CHECK(max_abs_difference(apply(adjoint(haar), f), apply(haar, f)) == 0.0);
    // adjoint(chi_E T) f = T* (chi_E f)
    for (const auto& T : {H, haar}) {
      CHECK(max_abs_difference(apply(adjoint(T.restricted_to(E)), f), apply(adjoint(T), mask(f, E))) <= 1e-14);
      CHECK(max_abs_difference(apply(T.restricted_to(E), f), mask(apply(T, f), E)) <= 1e-14);
    }
  }
}

TEST_CASE("square of the conjugate function") {
  Rng rng(4);
  for (std::size_t n : {8u, 256u}) {
    const auto H = LinearOperatorSpec::hilbert(n);
    for (int t = 0; t < 100; ++t) {
      const auto f = random_function(n, rng);
      const auto fc = f - nyquist_part(f);
      // Away from the Nyquist mode H is an isometry squaring to -(I - mean).
      CHECK(max_abs_difference(apply(H, apply(H, fc)), -centered(fc)) <= 1e-9);
      CHECK(std::fabs(norm(apply(H, fc), Exponent::finite(2)) - norm(centered(fc), Exponent::finite(2))) <= 1e-9);
      // On all of the grid the Nyquist component is annihilated as well.
      CHECK(max_abs_difference(apply(H, apply(H, f)), -(centered(f) - nyquist_part(f))) <= 1e-9);
    }
  }
}

TEST_CASE("haar transform is an involution onto mean-zero functions") {
  Rng rng(5);
  for (std::size_t n : {2u, 16u, 256u}) {
    const auto op = LinearOperatorSpec::haar_random(n, 17);
    for (int t = 0; t < 50; ++t) {
      const auto f = random_function(n, rng);
      CHECK(max_abs_difference(apply(op, apply(op, f)), centered(f)) <= 1e-9);
      CHECK(std::fabs(norm(apply(op, f), Exponent::finite(2)) - norm(centered(f), Exponent::finite(2))) <= 1e-9);
    }
  }
}

TEST_CASE("operator norm estimates at p = 2") {
  const std::size_t n = 64;
  const auto two = Exponent::finite(2);
  CHECK(operator_norm_estimate(LinearOperatorSpec::hilbert(n), two, 4) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(operator_norm_estimate(LinearOperatorSpec::identity_minus_mean(n), two, 4) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(operator_norm_estimate(LinearOperatorSpec::haar_random(n, 3), two, 4) == doctest::Approx(1.0).epsilon(1e-6));
  const double h3 = operator_norm_estimate(LinearOperatorSpec::hilbert(n), Exponent::finite(3), 20);
  CHECK(h3 > 0.5);
  CHECK(std::isfinite(h3));
}

TEST_CASE("long-range ratio") {
  const std::size_t n = 256;
  const auto H = LinearOperatorSpec::hilbert(n);
  CHECK(long_range_ratio(H, cz_decompose(GridFunction::zeros(n), 1.0)) == 0.0);
  // Dipoles h = chi_left - chi_right on [0, 2^-level); reference values from
  // the FFT computation in tests/oracles/freeze_values.py.
  auto ratio = [&](int level, double factor) {
    const auto f = dipole(n, level);
    const auto d = cz_from_cubes(f, 0.5, {{level, 0}}, factor);
    CHECK(d.bad == f);
    return long_range_ratio(H, d);
  };
  CHECK(ratio(2, 10.0) == 0.0);  // the dilate covers the circle
  CHECK(ratio(5, 10.0) == doctest::Approx(0.029292014916784775).epsilon(1e-9));
  CHECK(ratio(5, 2.0) == doctest::Approx(0.16704882669304605).epsilon(1e-9));
  CHECK(ratio(5, 10.0) <= 1.0);
  // Perfect localization of the Haar system: nothing leaks outside the cube.
  const auto f = dipole(n, 5);
  const auto d = cz_from_cubes(f, 0.5, {{5, 0}}, 1.0);
  CHECK(long_range_ratio(LinearOperatorSpec::haar_random(n, 1), d) <= 1e-15);
}

TEST_CASE("operator kind names") {
  for (auto k : {OperatorKind::hilbert, OperatorKind::haar, OperatorKind::identity_minus_mean}) {
    CHECK(parse_operator_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_operator_kind("riesz"), DomainError);
  CHECK_THROWS_AS(apply(LinearOperatorSpec::hilbert(8), GridFunction::zeros(4)), DimensionError);
}
