#include "stablab/serialize.hpp"

#include <cmath>

namespace stablab {
namespace {

// JSON has no infinity; unbounded ratios are written as null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const GridFunction& f) { return Json(f.vec()); }

GridFunction grid_function_from_json(const Json& j) {
  if (!j.is_array()) throw DomainError("grid function JSON must be an array of numbers");
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw DomainError("grid function JSON must be an array of numbers");
    v.push_back(x.get<double>());
  }
  return GridFunction(std::move(v));
}

Json to_json(const GridSet& set) {
  Json j = Json::array();
  for (auto m : set.membership()) j.push_back(static_cast<int>(m));
  return j;
}

GridSet grid_set_from_json(const Json& j) {
  if (!j.is_array()) throw DomainError("grid set JSON must be an array of 0/1");
  std::vector<std::uint8_t> m;
  m.reserve(j.size());
  for (const auto& x : j) {
    const int v = x.is_boolean() ? static_cast<int>(x.get<bool>()) : x.get<int>();
    if (v != 0 && v != 1) throw DomainError("grid set JSON entries must be 0 or 1");
    m.push_back(static_cast<std::uint8_t>(v));
  }
  return GridSet(std::move(m));
}

Json to_json(Exponent p) { return p.is_infinite() ? Json("inf") : Json(p.value()); }

Exponent exponent_from_json(const Json& j) {
  if (j.is_string()) return Exponent::parse(j.get<std::string>());
  return Exponent::finite(j.get<double>());
}

Json to_json(const DistanceResult& r) {
  return {{"value", r.value}, {"threshold", r.threshold}, {"s", r.s}, {"p", to_json(r.p)},
          {"ambient", to_json(r.ambient)}};
}

Json to_json(const CzDecomposition& d) {
  Json cubes = Json::array();
  for (const auto& q : d.cubes) cubes.push_back({{"level", q.level}, {"index", q.index}});
  return {{"lambda", d.level}, {"cubes", cubes}, {"dilation_factor", d.dilation_factor}};
}

CzDecomposition cz_from_json(const Json& j, const GridFunction& f) {
  std::vector<DyadicInterval> cubes;
  for (const auto& q : j.at("cubes")) cubes.push_back({q.at("level").get<int>(), q.at("index").get<std::int64_t>()});
  return cz_from_cubes(f, j.at("lambda").get<double>(), std::move(cubes),
                       j.value("dilation_factor", kDefaultDilation));
}

Json to_json(const LinearOperatorSpec& op) {
  Json j = {{"kind", to_string(op.kind)}, {"n", op.n}};
  if (op.kind == OperatorKind::haar) {
    Json signs = Json::array();
    for (auto s : op.signs) signs.push_back(static_cast<int>(s));
    j["signs"] = signs;
  }
  if (op.sign != 1) j["sign"] = op.sign;
  if (op.restriction) {
    j["restriction"] = to_json(*op.restriction);
    j["restriction_side"] = op.restriction_side == MaskSide::output ? "output" : "input";
  }
  return j;
}

LinearOperatorSpec operator_from_json(const Json& j) {
  const auto n = j.at("n").get<std::size_t>();
  const OperatorKind kind = parse_operator_kind(j.at("kind").get<std::string>());
  LinearOperatorSpec op;
  switch (kind) {
    case OperatorKind::hilbert:
      op = LinearOperatorSpec::hilbert(n);
      break;
    case OperatorKind::haar: {
      std::vector<std::int8_t> signs;
      for (const auto& s : j.at("signs")) signs.push_back(static_cast<std::int8_t>(s.get<int>()));
      op = LinearOperatorSpec::haar(n, std::move(signs));
      break;
    }
    case OperatorKind::identity_minus_mean:
      op = LinearOperatorSpec::identity_minus_mean(n);
      break;
  }
  op.sign = j.value("sign", 1);
  if (op.sign != 1 && op.sign != -1) throw DomainError("operator sign must be +1 or -1");
  if (j.contains("restriction")) {
    op = op.restricted_to(grid_set_from_json(j.at("restriction")));
    const std::string side = j.value("restriction_side", std::string("output"));
    if (side != "output" && side != "input") throw DomainError("restriction_side must be output or input");
    op.restriction_side = side == "output" ? MaskSide::output : MaskSide::input;
  }
  return op;
}

Json to_json(const StabilityReport& r) {
  return {{"s", r.s},
          {"a", r.a},
          {"b", r.b},
          {"c", r.c},
          {"t", r.t},
          {"r", r.r},
          {"lambda", r.lambda},
          {"p", r.p},
          {"dist1_f", r.dist1_f},
          {"dist1_Tf", r.dist1_Tf},
          {"residual_f", r.residual_f},
          {"residual_T", r.residual_T},
          {"norm_u_p", r.norm_u_p},
          {"ratio_p", r.ratio_p},
          {"ratio_f", r.ratio_f},
          {"ratio_T", r.ratio_T},
          {"cube_count", r.cube_count},
          {"omega_measure", r.omega_measure},
          {"long_range", r.long_range},
          {"degenerate", r.degenerate},
          {"root_guard", r.root_guard}};
}

Json to_json(const Redecomposition& r) {
  return {{"a", r.a},
          {"b", r.b},
          {"c", r.c},
          {"lambda", r.lambda},
          {"root_guard", r.root_guard},
          {"ratio_h", r.ratio_h},
          {"ratio_w", r.ratio_w},
          {"ratio_Tw", r.ratio_Tw},
          {"ratio_Th", r.ratio_Th},
          {"holder_lhs", r.holder_lhs},
          {"holder_rhs", r.holder_rhs},
          {"holder_ok", r.holder_ok},
          {"omega_measure", r.omega_measure}};
}

Json to_json(const DualResult& r) {
  return {{"c_star", number(r.c_star)},
          {"c_lower", number(r.c_lower)},
          {"residuals",
           {{"p", number(r.residuals.p_ratio)},
            {"f", number(r.residuals.f_ratio)},
            {"T", number(r.residuals.T_ratio)},
            {"support_ok", r.residuals.support_ok}}},
          {"iterations", r.iterations},
          {"inconclusive_steps", r.inconclusive_steps},
          {"status", r.status},
          {"certified", r.certified}};
}

}  // namespace stablab
