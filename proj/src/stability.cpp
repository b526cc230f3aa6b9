#include "stablab/stability.hpp"

#include <cmath>

#include "stablab/distance.hpp"

namespace stablab {
namespace {

double guarded_ratio(double num, double den) { return den > kDegenerateMass ? num / den : 0.0; }

void require_split_exponent(Exponent p) {
  if (p.is_infinite() || p.value() <= 1.0) throw DomainError("stability exponent must be finite and > 1");
}

}  // namespace

double bourgain_level(double a, double b, double p) {
  // lambda^{p-1} a = b^p, evaluated in logs.
  return std::exp((p * std::log(b) - std::log(a)) / (p - 1.0));
}

LevelSplit bourgain_split(const GridFunction& u0, double a, double b, double p, double dilation_factor) {
  const std::size_t n = u0.size();
  LevelSplit out{0.0, GridFunction::zeros(n), u0, GridSet::full(n), std::nullopt, true};
  if (b <= kDegenerateMass) return out;
  out.lambda = bourgain_level(a, b, p);
  // The root is selected iff its average ||u0||_1 exceeds lambda.
  if (norm(u0, Exponent::one()) > out.lambda) return out;
  CzDecomposition d = cz_decompose(u0, out.lambda, dilation_factor);
  out.good = d.good;
  out.bad = d.bad;
  out.omega = d.omega;
  out.cz = std::move(d);
  out.root_guard = false;
  return out;
}

StableNearMinimizer bourgain_construct(const GridFunction& f, const LinearOperatorSpec& op, double s, Exponent p) {
  if (!(s > 0.0)) throw DomainError("bourgain_construct needs s > 0");
  require_split_exponent(p);
  const std::size_t n = f.size();
  const DistanceResult near = dist_l1_to_lp_ball(f, s, p);
  const GridFunction& u1 = near.minimizer;
  const GridFunction u0 = f - u1;
  const GridFunction Tf = apply(op, f);

  StabilityReport rep;
  rep.s = s;
  rep.b = s;
  rep.p = p.value();
  rep.a = norm(u0, Exponent::one());
  rep.dist1_f = near.value;
  rep.dist1_Tf = dist_l1_to_lp_ball(Tf, s, p).value;
  rep.c = rep.dist1_Tf;

  if (rep.a <= kDegenerateMass) {
    rep.degenerate = true;
    rep.norm_u_p = norm(u1, p);
    rep.ratio_p = rep.norm_u_p / s;
    rep.residual_f = rep.a;
    rep.residual_T = norm(Tf - apply(op, u1), Exponent::one());
    return {u1, GridFunction::zeros(n), u0, std::nullopt, rep};
  }

  LevelSplit split = bourgain_split(u0, rep.a, rep.b, rep.p);
  GridFunction u = u1 + split.good;
  rep.lambda = split.lambda;
  rep.root_guard = split.root_guard;
  rep.norm_u_p = norm(u, p);
  rep.residual_f = norm(f - u, Exponent::one());
  const GridFunction Tu = apply(op, u);
  rep.residual_T = norm(Tf - Tu, Exponent::one());
  rep.ratio_p = rep.norm_u_p / s;
  rep.ratio_f = guarded_ratio(rep.residual_f, rep.dist1_f);
  rep.ratio_T = guarded_ratio(rep.residual_T, rep.dist1_f + rep.dist1_Tf);
  rep.omega_measure = split.omega.measure();
  if (split.cz) {
    rep.cube_count = split.cz->cubes.size();
    rep.long_range = long_range_ratio(op, *split.cz);
  } else {
    rep.cube_count = 1;
  }
  return {std::move(u), std::move(split.good), std::move(split.bad), std::move(split.cz), rep};
}

Redecomposition kclosed_redecompose(const GridFunction& u, const LinearOperatorSpec& op, const AmbientSplit& split,
                                    Exponent p) {
  require_split_exponent(p);
  const GridFunction Tu = apply(op, u);
  const double u_scale = 1.0 + norm(u, Exponent::infinity());
  const double tu_scale = 1.0 + norm(Tu, Exponent::infinity());
  if (max_abs_difference(split.u0 + split.u1, u) > 1e-9 * u_scale ||
      max_abs_difference(split.v0 + split.v1, Tu) > 1e-9 * tu_scale) {
    throw ConsistencyError("split does not add up to (u, Tu)");
  }

  Redecomposition out{split.u0, GridFunction::zeros(u.size()), split.u1, GridFunction::zeros(u.size())};
  out.a = std::max(norm(split.u0, Exponent::one()), norm(split.v0, Exponent::one()));
  out.b = std::max(norm(split.u1, p), norm(split.v1, p));
  out.c = norm(split.v0, Exponent::one());

  GridSet omega = GridSet::empty(u.size());
  if (out.a > kDegenerateMass) {
    LevelSplit ls = bourgain_split(split.u0, out.a, out.b, p.value());
    out.lambda = ls.lambda;
    out.root_guard = ls.root_guard;
    out.h = std::move(ls.bad);
    out.w = split.u1 + ls.good;
    omega = std::move(ls.omega);
  }
  out.Th = apply(op, out.h);
  out.Tw = apply(op, out.w);

  out.ratio_h = guarded_ratio(norm(out.h, Exponent::one()), out.a);
  out.ratio_w = guarded_ratio(norm(out.w, p), out.b);
  out.ratio_Tw = guarded_ratio(norm(out.Tw, p), out.b);
  out.ratio_Th = guarded_ratio(norm(out.Th, Exponent::one()), out.a + out.c);

  out.omega_measure = omega.measure();
  out.holder_lhs = norm(mask(out.Th, omega), Exponent::one());
  const double conj = p.conjugate().value();
  out.holder_rhs = out.c + std::pow(out.omega_measure, 1.0 / conj) * (norm(split.v1, p) + norm(out.Tw, p));
  out.holder_ok = out.holder_lhs <= out.holder_rhs + 1e-9 * tu_scale;
  return out;
}

std::vector<GridFunction> graph_approx_sequence(const GridFunction& f, const LinearOperatorSpec& op,
                                                const std::vector<double>& s_list, Exponent p) {
  for (std::size_t k = 1; k < s_list.size(); ++k) {
    if (!(s_list[k] > s_list[k - 1])) throw DomainError("s_list must be strictly increasing");
  }
  std::vector<GridFunction> terms;
  terms.reserve(s_list.size());
  for (double s : s_list) terms.push_back(bourgain_construct(f, op, s, p).u);
  return terms;
}

GraphResiduals graph_residuals(const GridFunction& f, const LinearOperatorSpec& op,
                               const std::vector<GridFunction>& terms) {
  GraphResiduals out;
  const GridFunction Tf = apply(op, f);
  for (const auto& fk : terms) {
    out.residual_f.push_back(norm(f - fk, Exponent::one()));
    out.residual_T.push_back(norm(Tf - apply(op, fk), Exponent::one()));
  }
  return out;
}

}  // namespace stablab
