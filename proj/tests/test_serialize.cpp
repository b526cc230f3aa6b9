#include "doctest.h"
#include "stablab/random.hpp"
#include "stablab/serialize.hpp"

using namespace stablab;

TEST_CASE("grid function and set round trips") {
  const GridFunction f({1.0, -0.5, 3.25, 1e-300});
  CHECK(grid_function_from_json(Json::parse(to_json(f).dump())) == f);
  const GridSet E = GridSet::cells_in(8, 0.25, 0.75);
  CHECK(grid_set_from_json(Json::parse(to_json(E).dump())) == E);
  CHECK(grid_set_from_json(Json::parse("[true, false]")) == GridSet(std::vector<std::uint8_t>{1, 0}));
  CHECK_THROWS_AS(grid_function_from_json(Json::parse("[1, \"x\"]")), DomainError);
  CHECK_THROWS_AS(grid_function_from_json(Json::parse("{}")), DomainError);
  CHECK_THROWS_AS(grid_set_from_json(Json::parse("[0, 2]")), DomainError);
}

TEST_CASE("exponents") {
  for (auto p : {Exponent::one(), Exponent::finite(2.5), Exponent::infinity()}) {
    CHECK(exponent_from_json(to_json(p)) == p);
  }
}

TEST_CASE("operator round trips") {
  const GridSet E = GridSet::cells_in(16, 0.0, 0.5);
  for (const auto& op : {LinearOperatorSpec::hilbert(16), LinearOperatorSpec::haar_random(16, 3),
                         LinearOperatorSpec::identity_minus_mean(16), adjoint(LinearOperatorSpec::hilbert(16)),
                         LinearOperatorSpec::hilbert(16).restricted_to(E),
                         adjoint(LinearOperatorSpec::haar_random(16, 4).restricted_to(E))}) {
    const auto back = operator_from_json(Json::parse(to_json(op).dump()));
    CHECK(to_json(back) == to_json(op));
    Rng rng(9);
    std::vector<double> v(16);
    for (auto& x : v) x = rng.normal();
    const GridFunction g(v);
    CHECK(apply(back, g) == apply(op, g));
  }
  CHECK_THROWS_AS(operator_from_json(Json::parse(R"({"kind":"hilbert","n":8,"sign":2})")), DomainError);
}

TEST_CASE("CZ decomposition rebuilt from its cubes") {
  Rng rng(10);
  std::vector<double> v(64);
  for (auto& x : v) x = rng.normal() * 3.0;
  const GridFunction f(v);
  const auto d = cz_decompose(f, 2.0 * norm(f, Exponent::one()));
  const auto back = cz_from_json(Json::parse(to_json(d).dump()), f);
  CHECK(back.cubes == d.cubes);
  CHECK(back.good == d.good);
  CHECK(back.bad == d.bad);
  CHECK(back.omega == d.omega);
}

TEST_CASE("reports serialize every field") {
  const auto res = bourgain_construct(GridFunction({4.0, 0.0, 0.0, 0.0}), LinearOperatorSpec::hilbert(4), 0.5,
                                      Exponent::finite(2));
  const Json j = to_json(res.report);
  CHECK(j.size() == 21);
  CHECK(j.at("ratio_p").get<double>() == res.report.ratio_p);
  const auto dr = to_json(distance(GridFunction({1.0, -2.0}), 0.5, Exponent::finite(2), Exponent::infinity()));
  CHECK(dr.at("ambient") == "inf");
}
