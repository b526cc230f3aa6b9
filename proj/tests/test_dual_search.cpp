#include <cmath>

#include "doctest.h"
#include "stablab/dual_search.hpp"
#include "stablab/oracle.hpp"
#include "stablab/random.hpp"

using namespace stablab;

namespace {

const GridFunction f8({0.3, -2.0, 1.1, 4.0, 0.0, -0.7, 2.5, 1.0});

// Minimal constants from an independent convex solve (tests/oracles/freeze_values.py).
void check_near(const DualResult& d, double truth, double tol) {
  CHECK(d.certified);
  CHECK(d.c_star >= truth * (1.0 - 1e-6));
  CHECK(d.c_star <= truth * (1.0 + 2.0 * tol));
  CHECK(d.c_lower <= truth * (1.0 + 1e-6));
}

}  // namespace

TEST_CASE("instance construction") {
  const auto inst = make_instance(GridFunction::constant(8, 2.0), LinearOperatorSpec::hilbert(8), 1.0,
                                  Exponent::finite(2));
  CHECK(inst.r == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(inst.t == doctest::Approx(0.0));
  CHECK(norm(inst.Tstar_f, Exponent::infinity()) <= 1e-14);

  const auto g = make_instance(f8, LinearOperatorSpec::hilbert(8), 1.0, Exponent::finite(2));
  CHECK(g.r == doctest::Approx(2.8777999115531143).epsilon(1e-9));
  CHECK(g.t == doctest::Approx(2.1343335361426057).epsilon(1e-9));
}

TEST_CASE("constant function against the conjugate function") {
  // v = 2 beta with T* v = 0; |2 - 2 beta| <= 2c and 2 beta <= c give c = 2/3.
  const auto inst = make_instance(GridFunction::constant(8, 2.0), LinearOperatorSpec::hilbert(8), 1.0,
                                  Exponent::finite(2));
  const auto d = min_constant(inst, 1e-6);
  check_near(d, 2.0 / 3.0, 1e-6);
  CHECK(d.status == "converged");
}

TEST_CASE("frozen minimal constants") {
  const double tol = 1e-3;
  check_near(min_constant(make_instance(f8, LinearOperatorSpec::hilbert(8), 1.0, Exponent::finite(2)), tol),
             0.7101880956390683, tol);
  check_near(min_constant(make_instance(f8, LinearOperatorSpec::hilbert(8), 1.0, Exponent::finite(3)), tol),
             0.6644825191782461, tol);
  check_near(
      min_constant(make_instance(f8, LinearOperatorSpec::identity_minus_mean(8), 1.0, Exponent::finite(2)), tol),
      0.7101880956395414, tol);
}

TEST_CASE("feasibility is monotone in the constant") {
  const auto inst = make_instance(f8, LinearOperatorSpec::hilbert(8), 1.0, Exponent::finite(2));
  bool seen_feasible = false;
  for (double c = 0.5; c < 1.2; c += 0.02) {
    const auto o = feasible(inst, c);
    REQUIRE(o.status != FeasibilityStatus::inconclusive);
    const bool ok = o.status == FeasibilityStatus::feasible;
    if (seen_feasible) CHECK(ok);
    seen_feasible = seen_feasible || ok;
    if (ok) CHECK(certify_witness(inst, *o.v, c));
  }
  CHECK(seen_feasible);
}

TEST_CASE("support mode keeps witnesses inside E") {
  Rng rng(21);
  const std::size_t n = 32;
  const GridSet E = GridSet::cells_in(n, 0.0, 0.5);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < n / 2; ++i) v[i] = rng.normal();
    const GridFunction f(v);
    const auto inst = make_instance(f, LinearOperatorSpec::hilbert(n), 0.5, Exponent::finite(2), E);
    const auto d = min_constant(inst, 1e-3);
    CHECK(d.certified);
    CHECK(d.residuals.support_ok);
    for (std::size_t i = n / 2; i < n; ++i) CHECK(d.v[i] == 0.0);
  }
  CHECK_THROWS_AS(make_instance(GridFunction::constant(n, 1.0), LinearOperatorSpec::hilbert(n), 1.0,
                                Exponent::finite(2), E),
                  SupportError);
}

TEST_CASE("witness residuals are direct norms") {
  const auto inst = make_instance(f8, LinearOperatorSpec::hilbert(8), 1.0, Exponent::finite(2));
  const auto res = witness_residuals(inst, f8);
  CHECK(res.p_ratio == doctest::Approx(norm(f8, Exponent::finite(2))));
  CHECK(res.f_ratio == 0.0);
  CHECK(res.T_ratio == 0.0);
  CHECK(witness_constant(inst, GridFunction::zeros(8)) ==
        doctest::Approx(std::max(norm(f8, Exponent::infinity()) / inst.r,
                                 norm(inst.Tstar_f, Exponent::infinity()) / (inst.t + inst.r))));
}

TEST_CASE("penalty oracle agrees away from the threshold") {
  const auto inst = make_instance(f8, LinearOperatorSpec::hilbert(8), 1.0, Exponent::finite(2));
  const double c = 0.7101880956390683;
  const auto above = oracle::penalty_feasibility(f8, inst.Tstar, 1.0, inst.r, inst.t, 1.05 * c);
  const auto below = oracle::penalty_feasibility(f8, inst.Tstar, 1.0, inst.r, inst.t, 0.95 * c);
  CHECK(above.verdict == oracle::Verdict::feasible);
  CHECK(below.verdict == oracle::Verdict::infeasible);
  CHECK(feasible(inst, 1.05 * c).status == FeasibilityStatus::feasible);
  CHECK(feasible(inst, 0.95 * c).status == FeasibilityStatus::infeasible);
}

TEST_CASE("annihilator of the graph") {
  Rng rng(22);
  const std::size_t n = 64;
  for (const auto& T : {LinearOperatorSpec::hilbert(n), LinearOperatorSpec::haar_random(n, 8)}) {
    for (int t = 0; t < 50; ++t) {
      std::vector<double> b(n), g(n);
      for (auto& x : b) x = rng.normal();
      for (auto& x : g) x = rng.normal();
      const GridFunction beta(b), gf(g);
      const auto ann = annihilator_pair(beta, T);
      CHECK(std::fabs(duality_pairing(ann, {gf, apply(T, gf)})) <= 1e-10);
    }
  }
}

TEST_CASE("argument errors") {
  const auto inst = make_instance(f8, LinearOperatorSpec::hilbert(8), 1.0, Exponent::finite(2));
  CHECK_THROWS_AS(feasible(inst, 0.0), DomainError);
  CHECK_THROWS_AS(feasible(inst, -1.0), DomainError);
  CHECK_THROWS_AS(min_constant(inst, 0.0), DomainError);
  CHECK_THROWS_AS(oracle::brute_force_distance(GridFunction::zeros(16), 1.0, Exponent::finite(2), Exponent::one()),
                  oracle::ScaleError);
}
