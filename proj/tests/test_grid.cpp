#include <cmath>

#include "doctest.h"
#include "stablab/grid.hpp"
#include "stablab/random.hpp"

using namespace stablab;

namespace {
GridFunction random_function(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return GridFunction(std::move(v));
}
}  // namespace

TEST_CASE("grid sizes are powers of two >= 2") {
  CHECK_THROWS_AS(GridFunction(std::vector<double>{1.0}), DimensionError);
  CHECK_THROWS_AS(GridFunction(std::vector<double>{1.0, 2.0, 3.0}), DimensionError);
  CHECK_NOTHROW(GridFunction(std::vector<double>{1.0, 2.0}));
  CHECK_THROWS_AS(GridFunction(std::vector<double>{1.0, NAN}), DomainError);
  CHECK_THROWS_AS(GridFunction(std::vector<double>{INFINITY, 0.0}), DomainError);
}

TEST_CASE("norm examples") {
  CHECK(norm(GridFunction::constant(8, 1.0), Exponent::finite(2)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(norm(GridFunction({1.0, 0.0}), Exponent::one()) == 0.5);
  const GridFunction f({2.0, 0.0});
  CHECK(norm(f, Exponent::one()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(norm(f, Exponent::finite(2)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(norm(f, Exponent::infinity()) == 2.0);
  CHECK(norm(GridFunction::zeros(4), Exponent::finite(3)) == 0.0);
}

TEST_CASE("norm avoids overflow through rescaling") {
  const GridFunction f({1e200, 1e200, 0.0, 0.0});
  CHECK(norm(f, Exponent::finite(3)) == doctest::Approx(1e200 * std::pow(0.5, 1.0 / 3.0)).epsilon(1e-12));
  const GridFunction tiny({1e-200, 0.0});
  CHECK(norm(tiny, Exponent::finite(2)) == doctest::Approx(1e-200 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("exponent conjugates") {
  CHECK(Exponent::finite(2).conjugate() == Exponent::finite(2));
  CHECK(Exponent::one().conjugate().is_infinite());
  CHECK(Exponent::infinity().conjugate().is_one());
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const double p = 1.0 + 10.0 * rng.uniform() + 1e-3;
    CHECK(Exponent::finite(p).conjugate().conjugate().value() == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK(Exponent::parse("inf").is_infinite());
  CHECK(Exponent::parse("3").value() == 3.0);
  CHECK_THROWS_AS(Exponent::finite(0.5), DomainError);
  CHECK_THROWS(Exponent::parse("abc"));
}

TEST_CASE("mask examples") {
  const GridFunction f({1.0, 2.0});
  CHECK(mask(f, GridSet::full(2)) == f);
  CHECK(mask(f, GridSet::empty(2)) == GridFunction::zeros(2));
  CHECK(mask(f, GridSet({0, 1})) == GridFunction({0.0, 2.0}));
  CHECK_THROWS_AS(mask(f, GridSet::full(4)), DimensionError);
}

TEST_CASE("grid set measure") {
  const GridSet s({1, 0, 1, 1});
  CHECK(s.count() == 3);
  CHECK(s.measure() == 0.75);
  CHECK(s.complement().measure() == 0.25);
  CHECK(GridSet::cells_in(8, 0.0, 0.5) == GridSet({1, 1, 1, 1, 0, 0, 0, 0}));
}

TEST_CASE("dilate_interval examples") {
  CHECK(dilate_interval({3, 0}, 1.0, 8) == GridSet({1, 0, 0, 0, 0, 0, 0, 0}));
  CHECK(dilate_interval({2, 1}, 1.0, 8) == GridSet({0, 0, 1, 1, 0, 0, 0, 0}));
  CHECK(dilate_interval({2, 0}, 10.0, 8) == GridSet::full(8));
  CHECK(dilate_interval({3, 0}, 2.0, 8) == GridSet({1, 1, 0, 0, 0, 0, 0, 1}));
  CHECK_THROWS_AS(dilate_interval({3, 0}, 0.5, 8), DomainError);
}

TEST_CASE("dilation measure bound at levels <= 6") {
  const std::size_t n = 64;
  for (int level = 0; level <= 6; ++level) {
    for (std::int64_t index = 0; index < (std::int64_t{1} << level); ++index) {
      const DyadicInterval q{level, index};
      for (double factor : {1.0, 1.5, 2.0, 3.0, 10.0}) {
        const double bound = std::min(1.0, factor * q.length()) + 2.0 / static_cast<double>(n);
        CHECK(dilate_interval(q, factor, n).measure() <= bound);
        // The dilate always covers Q itself.
        const GridSet d = dilate_interval(q, factor, n);
        for (std::size_t c = q.first_cell(n); c < q.first_cell(n) + q.cell_count(n); ++c) CHECK(d.contains(c));
      }
    }
  }
}

TEST_CASE("dyadic intervals nest or are disjoint") {
  std::vector<DyadicInterval> all;
  for (int level = 0; level <= 6; ++level) {
    for (std::int64_t i = 0; i < (std::int64_t{1} << level); ++i) all.push_back({level, i});
  }
  std::size_t checked = 0;
  for (const auto& a : all) {
    for (const auto& b : all) {
      const bool nested = a.contains(b) || b.contains(a);
      CHECK(nested != a.disjoint(b));
      const bool overlap = std::max(a.left(), b.left()) < std::min(a.right(), b.right());
      CHECK(overlap == nested);
      ++checked;
    }
  }
  CHECK(checked == all.size() * all.size());
  CHECK(DyadicInterval{3, 5}.parent() == DyadicInterval{2, 2});
  CHECK(DyadicInterval{2, 2}.child(1) == DyadicInterval{3, 5});
}

TEST_CASE("Hoelder inequality on random probes") {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = std::size_t{1} << (1 + rng.below(8));
    const GridFunction f = random_function(n, rng), g = random_function(n, rng);
    const Exponent p = t % 4 == 0 ? Exponent::one() : Exponent::finite(1.0 + 5.0 * rng.uniform() + 1e-3);
    CHECK(std::fabs(inner(f, g)) <= norm(f, p) * norm(g, p.conjugate()) * (1.0 + 1e-12));
  }
}

TEST_CASE("norms increase with the exponent on a probability space") {
  Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = std::size_t{1} << (1 + rng.below(8));
    const GridFunction f = random_function(n, rng);
    const double p = 1.0 + 4.0 * rng.uniform();
    const double r = p + 4.0 * rng.uniform();
    CHECK(norm(f, Exponent::finite(p)) <= norm(f, Exponent::finite(r)) * (1.0 + 1e-12));
    CHECK(norm(f, Exponent::finite(r)) <= norm(f, Exponent::infinity()) * (1.0 + 1e-12));
  }
}
