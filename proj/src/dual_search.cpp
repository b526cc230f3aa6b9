#include "stablab/dual_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "stablab/distance.hpp"

namespace stablab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio_or_inf(double num, double den) {
  if (den > 0.0) return num / den;
  return num == 0.0 ? 0.0 : kInf;
}

// Magnitude rho >= 0 solving rho + mu p rho^{p-1} = a (the prox of mu|.|^p at
// a >= 0). Newton from the right on a convex reformulation converges
// monotonically: in rho itself for p >= 2, in sigma = rho^{p-1} for p < 2.
double prox_magnitude(double a, double mu, double p) {
  if (a <= 0.0) return 0.0;
  if (mu <= 0.0) return a;
  if (p == 2.0) return a / (1.0 + 2.0 * mu);
  const double mp = mu * p;
  if (p > 2.0) {
    double rho = std::min(a, std::pow(a / mp, 1.0 / (p - 1.0)));
    for (int it = 0; it < 60; ++it) {
      const double rp = std::pow(rho, p - 2.0);
      const double phi = rho + mp * rp * rho - a;
      const double dphi = 1.0 + mp * (p - 1.0) * rp;
      const double step = phi / dphi;
      rho -= step;
      if (rho <= 0.0) return 0.0;
      if (step <= 1e-15 * rho) break;
    }
    return rho;
  }
  const double q = 1.0 / (p - 1.0);
  double sigma = std::min(a / mp, std::pow(a, p - 1.0));
  for (int it = 0; it < 60; ++it) {
    const double sq = std::pow(sigma, q - 1.0);
    const double psi = sq * sigma + mp * sigma - a;
    const double dpsi = q * sq + mp;
    const double step = psi / dpsi;
    sigma -= step;
    if (sigma <= 0.0) return 0.0;
    if (step <= 1e-15 * sigma) break;
  }
  return std::pow(sigma, q);
}

double pow_abs(double x, double p) {
  const double a = std::fabs(x);
  if (p == 2.0) return a * a;
  return a > 0.0 ? std::pow(a, p) : 0.0;
}

// Euclidean projection onto {sum |x_i|^p <= budget} intersected with the box
// lo <= x <= hi. Per coordinate the answer is the prox of mu|.|^p clipped to
// the box; mu >= 0 is found by a bracketed Illinois iteration and the
// returned point always lies on the feasible side.
class BallBoxProjector {
 public:
  BallBoxProjector(double p, double budget, std::vector<double> lo, std::vector<double> hi)
      : p_(p), budget_(budget), lo_(std::move(lo)), hi_(std::move(hi)) {}

  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }
  double budget() const { return budget_; }

  void project(std::span<const double> q, std::span<double> out) {
    if (mass_at(q, 0.0, out) <= budget_) return;
    double mu_hi = last_mu_ > 0.0 ? last_mu_ : 1.0;
    double g_hi = mass_at(q, mu_hi, out) - budget_;
    double mu_lo = 0.0;
    double g_lo = kInf;
    if (g_hi > 0.0) {
      for (int it = 0; it < 400 && g_hi > 0.0; ++it) {
        mu_lo = mu_hi;
        g_lo = g_hi;
        mu_hi *= 4.0;
        g_hi = mass_at(q, mu_hi, out) - budget_;
      }
      if (g_hi > 0.0) return;  // box minimum sits outside the ball; best effort
    } else {
      for (int it = 0; it < 400; ++it) {
        const double m = mu_hi / 4.0;
        const double g = mass_at(q, m, out) - budget_;
        if (g > 0.0) {
          mu_lo = m;
          g_lo = g;
          break;
        }
        mu_hi = m;
        g_hi = g;
        if (m < 1e-300) break;
      }
    }
    if (std::isinf(g_lo)) g_lo = mass_at(q, mu_lo, out) - budget_;

    int side = 0;
    for (int it = 0; it < 200; ++it) {
      if (mu_hi - mu_lo <= 1e-15 * mu_hi || -g_hi <= 1e-13 * budget_) break;
      double mu = (mu_lo * g_hi - mu_hi * g_lo) / (g_hi - g_lo);
      if (!(mu > mu_lo && mu < mu_hi)) mu = 0.5 * (mu_lo + mu_hi);
      const double g = mass_at(q, mu, out) - budget_;
      if (g > 0.0) {
        mu_lo = mu;
        g_lo = g;
        if (side == -1) g_hi *= 0.5;
        side = -1;
      } else {
        mu_hi = mu;
        g_hi = g;
        if (side == 1) g_lo *= 0.5;
        side = 1;
      }
    }
    last_mu_ = mu_hi;
    mass_at(q, mu_hi, out);
  }

  // Upper bound on max <z, x> over the set via the Lagrangian with multiplier
  // mu, minimized over mu. Any mu gives a valid bound.
  double support_upper_bound(std::span<const double> z) const {
    const double d0 = lagrangian_slope(z, 0.0);
    double best = lagrangian_value(z, 0.0);
    if (d0 >= 0.0) return best;
    double mu_lo = 0.0;
    double mu_hi = 1.0;
    for (int it = 0; it < 400 && lagrangian_slope(z, mu_hi) < 0.0; ++it) {
      best = std::min(best, lagrangian_value(z, mu_hi));
      mu_lo = mu_hi;
      mu_hi *= 4.0;
    }
    for (int it = 0; it < 100; ++it) {
      const double mu = mu_lo > 0.0 ? std::sqrt(mu_lo * mu_hi) : 0.5 * mu_hi;
      best = std::min(best, lagrangian_value(z, mu));
      if (lagrangian_slope(z, mu) < 0.0) {
        mu_lo = mu;
      } else {
        mu_hi = mu;
      }
      if (mu_hi - mu_lo <= 1e-14 * mu_hi) break;
    }
    return std::min(best, lagrangian_value(z, mu_hi));
  }

 private:
  double mass_at(std::span<const double> q, double mu, std::span<double> out) const {
    double mass = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double rho = prox_magnitude(std::fabs(q[i]), mu, p_);
      out[i] = std::clamp(std::copysign(rho, q[i]), lo_[i], hi_[i]);
      mass += pow_abs(out[i], p_);
    }
    return mass;
  }

  double coordinate_argmax(double z, double mu, std::size_t i) const {
    double x;
    if (mu <= 0.0) {
      if (z > 0.0) {
        x = hi_[i];
      } else if (z < 0.0) {
        x = lo_[i];
      } else {
        x = std::clamp(0.0, lo_[i], hi_[i]);
      }
    } else {
      x = z == 0.0 ? 0.0 : std::copysign(std::pow(std::fabs(z) / (mu * p_), 1.0 / (p_ - 1.0)), z);
      x = std::clamp(x, lo_[i], hi_[i]);
    }
    return x;
  }

  double lagrangian_value(std::span<const double> z, double mu) const {
    double v = mu * budget_;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double x = coordinate_argmax(z[i], mu, i);
      v += z[i] * x - mu * pow_abs(x, p_);
    }
    return v;
  }

  double lagrangian_slope(std::span<const double> z, double mu) const {
    double mass = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) mass += pow_abs(coordinate_argmax(z[i], mu, i), p_);
    return budget_ - mass;
  }

  double p_;
  double budget_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  double last_mu_ = 0.0;
};

// Instance data rescaled by 1/scale so that the iteration runs at unit size.
struct ScaledProblem {
  double scale = 1.0;
  std::size_t n = 0;
  std::vector<double> f;
  std::vector<double> Kf;
  double radius = 0.0;  // c (t + r) / scale
  LinearOperatorSpec K;
  LinearOperatorSpec Kt;
};

std::vector<double> apply_vec(const LinearOperatorSpec& op, std::span<const double> x) {
  return apply(op, GridFunction(std::vector<double>(x.begin(), x.end()))).vec();
}

bool separates(const ScaledProblem& pb, const BallBoxProjector& proj, std::span<const double> y) {
  double ny = 0.0;
  for (double v : y) ny = std::max(ny, std::fabs(v));
  if (ny == 0.0 || !std::isfinite(ny)) return false;
  std::vector<double> yn(y.begin(), y.end());
  for (double& v : yn) v /= ny;
  for (int sign : {1, -1}) {
    if (sign < 0) {
      for (double& v : yn) v = -v;
    }
    double lower = 0.0;
    double l1 = 0.0;
    for (std::size_t j = 0; j < pb.n; ++j) {
      lower += yn[j] * pb.Kf[j];
      l1 += std::fabs(yn[j]);
    }
    lower -= pb.radius * l1;
    const std::vector<double> z = apply_vec(pb.Kt, yn);
    const double upper = proj.support_upper_bound(z);
    const double margin = 1e-9 * (std::fabs(lower) + std::fabs(upper) + l1 * pb.radius + 1e-300);
    if (upper < lower - margin) return true;
  }
  return false;
}

}  // namespace

std::string to_string(FeasibilityStatus status) {
  switch (status) {
    case FeasibilityStatus::feasible:
      return "feasible";
    case FeasibilityStatus::infeasible:
      return "infeasible";
    case FeasibilityStatus::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

DualInstance make_instance(const GridFunction& f, const LinearOperatorSpec& T, double s, Exponent p,
                           std::optional<GridSet> support) {
  if (!(s > 0.0)) throw DomainError("dual instance needs s > 0");
  if (p.is_infinite() || p.value() <= 1.0) throw DomainError("dual instance exponent must be finite and > 1");
  if (T.n != f.size()) throw DimensionError("operator and function grid sizes differ");
  LinearOperatorSpec restricted = T;
  if (support) {
    if (support->size() != f.size()) throw DimensionError("support set size mismatch");
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!support->contains(i) && f[i] != 0.0) throw SupportError("f does not vanish off the support set");
    }
    restricted = T.restricted_to(*support);
  }
  DualInstance inst{f, adjoint(restricted), s, p, 0.0, 0.0, std::move(support), f};
  inst.Tstar_f = apply(inst.Tstar, f);
  inst.r = 2.0 * dist_linf_to_lp_ball(f, s, p).value;
  inst.t = 2.0 * dist_linf_to_lp_ball(inst.Tstar_f, s, p).value;
  return inst;
}

Residuals witness_residuals(const DualInstance& inst, const GridFunction& v) {
  Residuals res;
  res.p_ratio = norm(v, inst.p) / inst.s;
  res.f_ratio = ratio_or_inf(norm(inst.f - v, Exponent::infinity()), inst.r);
  const GridFunction diff = inst.Tstar_f - apply(inst.Tstar, v);
  res.T_ratio = ratio_or_inf(norm(diff, Exponent::infinity()), inst.t + inst.r);
  if (inst.support) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!inst.support->contains(i) && v[i] != 0.0) res.support_ok = false;
    }
  }
  return res;
}

double witness_constant(const DualInstance& inst, const GridFunction& v) {
  const Residuals r = witness_residuals(inst, v);
  if (!r.support_ok) return kInf;
  return std::max({r.p_ratio, r.f_ratio, r.T_ratio});
}

bool certify_witness(const DualInstance& inst, const GridFunction& v, double c, double tol_feas) {
  const double level = c * (1.0 + tol_feas);
  const Residuals r = witness_residuals(inst, v);
  return r.support_ok && r.p_ratio <= level && r.f_ratio <= level && r.T_ratio <= level;
}

FeasibilityOutcome feasible(const DualInstance& inst, double c, const SolverOptions& opts, SolverState* warm) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("feasibility constant must be positive");
  const std::size_t n = inst.f.size();
  FeasibilityOutcome out;

  auto accept = [&](GridFunction v, const char* reason, int iterations) {
    out.status = FeasibilityStatus::feasible;
    out.v = std::move(v);
    out.reason = reason;
    out.iterations = iterations;
    return out;
  };
  auto reject = [&](const char* reason, int iterations) {
    out.status = FeasibilityStatus::infeasible;
    out.reason = reason;
    out.iterations = iterations;
    return out;
  };

  if (certify_witness(inst, inst.f, c, opts.tol_feas)) return accept(inst.f, "candidate", 0);
  if (inst.r == 0.0) return reject("forced", 0);  // v = f is the only point with ||f - v||_inf <= 0

  // The box around f meets the ball iff its least-norm point, the soft
  // threshold of f at level c r, does.
  const GridFunction least = soft_threshold(inst.f, c * inst.r);
  if (norm(least, inst.p) > c * inst.s) return reject("empty_ball_box", 0);
  if (certify_witness(inst, least, c, opts.tol_feas)) return accept(least, "candidate", 0);

  ScaledProblem pb;
  pb.n = n;
  pb.scale = norm(inst.f, Exponent::infinity());
  const double inv = 1.0 / pb.scale;
  pb.f.resize(n);
  pb.Kf.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    pb.f[i] = inst.f[i] * inv;
    pb.Kf[i] = inst.Tstar_f[i] * inv;
  }
  pb.radius = c * (inst.t + inst.r) * inv;
  pb.K = inst.Tstar;
  pb.Kt = adjoint(inst.Tstar);

  const double p = inst.p.value();
  const double ball = c * inst.s * inv;
  std::vector<double> lo(n);
  std::vector<double> hi(n);
  const double box = c * inst.r * inv;
  for (std::size_t i = 0; i < n; ++i) {
    const bool inside = !inst.support || inst.support->contains(i);
    lo[i] = inside ? pb.f[i] - box : 0.0;
    hi[i] = inside ? pb.f[i] + box : 0.0;
  }
  BallBoxProjector proj(p, static_cast<double>(n) * std::pow(ball, p), std::move(lo), std::move(hi));

  auto to_witness = [&](std::span<const double> x) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = x[i] * pb.scale;
    return GridFunction(std::move(v));
  };

  std::vector<double> x(n);
  std::vector<double> y(n, 0.0);
  if (warm != nullptr && warm->x.size() == n && warm->y.size() == n) {
    proj.project(warm->x, x);
    y = warm->y;
  } else {
    proj.project(pb.f, x);
  }
  {
    GridFunction v = to_witness(x);
    if (certify_witness(inst, v, c, opts.tol_feas)) return accept(std::move(v), "candidate", 0);
  }

  // Chambolle-Pock with ||K|| <= 1 for every operator in the zoo.
  constexpr double tau = 0.95;
  constexpr double sigma = 0.95;
  std::vector<double> xbar = x;
  std::vector<double> q(n);
  std::vector<double> xnew(n);
  std::vector<double> y_prev = y;
  for (int k = 1; k <= opts.max_iter; ++k) {
    const std::vector<double> Kxbar = apply_vec(pb.K, xbar);
    for (std::size_t j = 0; j < n; ++j) {
      const double zj = y[j] + sigma * Kxbar[j];
      const double w = std::clamp(zj / sigma, pb.Kf[j] - pb.radius, pb.Kf[j] + pb.radius);
      y[j] = zj - sigma * w;
    }
    const std::vector<double> Kty = apply_vec(pb.Kt, y);
    for (std::size_t i = 0; i < n; ++i) q[i] = x[i] - tau * Kty[i];
    proj.project(q, xnew);
    for (std::size_t i = 0; i < n; ++i) {
      xbar[i] = 2.0 * xnew[i] - x[i];
      x[i] = xnew[i];
    }

    if (k % opts.check_every == 0 || k == opts.max_iter) {
      GridFunction v = to_witness(x);
      if (certify_witness(inst, v, c, opts.tol_feas)) {
        if (warm != nullptr) *warm = {x, y};
        return accept(std::move(v), "iteration", k);
      }
      std::vector<double> dy(n);
      for (std::size_t j = 0; j < n; ++j) dy[j] = y[j] - y_prev[j];
      y_prev = y;
      if (separates(pb, proj, dy) || separates(pb, proj, y)) {
        if (warm != nullptr) *warm = {x, y};
        return reject("separation", k);
      }
    }
  }
  if (warm != nullptr) *warm = {x, y};
  out.status = FeasibilityStatus::inconclusive;
  out.reason = "budget";
  out.iterations = opts.max_iter;
  return out;
}

DualResult min_constant(const DualInstance& inst, double tol, const SolverOptions& opts) {
  if (!(tol > 0.0)) throw DomainError("bisection tolerance must be positive");
  DualResult res{0.0, 0.0, inst.f, {}, 0, 0, "degenerate", false};
  const double f_p = norm(inst.f, inst.p);
  if (f_p == 0.0) {
    res.residuals = witness_residuals(inst, inst.f);
    res.certified = true;
    return res;
  }
  const double c_f = f_p / inst.s;  // v = f is a witness here
  if (inst.r == 0.0) {
    res.c_star = c_f;
    res.c_lower = c_f;
    res.residuals = witness_residuals(inst, inst.f);
    res.certified = certify_witness(inst, inst.f, c_f, opts.tol_feas);
    return res;
  }

  // Below c_lo the L^p ball misses the box around f altogether.
  double lo = 0.0;
  {
    double a = 0.0;
    double b = c_f;
    for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
      const double m = 0.5 * (a + b);
      if (norm(soft_threshold(inst.f, m * inst.r), inst.p) > m * inst.s) {
        a = m;
      } else {
        b = m;
      }
    }
    lo = a;
  }
  res.c_lower = lo;

  SolverState state;
  double hi = c_f;
  GridFunction witness = inst.f;
  auto record = [&](const FeasibilityOutcome& o, double c) {
    res.iterations += o.iterations;
    if (o.status == FeasibilityStatus::feasible) {
      const double wc = witness_constant(inst, *o.v);
      hi = std::clamp(std::min(c, wc), lo, hi);
      witness = *o.v;
      return true;
    }
    if (o.status == FeasibilityStatus::inconclusive) {
      ++res.inconclusive_steps;
    } else {
      res.c_lower = std::max(res.c_lower, c);
    }
    lo = std::max(lo, c);
    return false;
  };

  // Grow geometrically from max(1, lo) until feasible; v = f closes the loop at c_f.
  for (double c = std::max(1.0, lo); c < hi; c *= 2.0) {
    if (record(feasible(inst, c, opts, &state), c)) break;
  }
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    record(feasible(inst, mid, opts, &state), mid);
  }

  res.c_star = hi;
  res.v = witness;
  res.residuals = witness_residuals(inst, witness);
  res.certified = certify_witness(inst, witness, hi, opts.tol_feas);
  res.status = res.inconclusive_steps == 0 ? "converged" : "inconclusive";
  return res;
}

GridPair annihilator_pair(const GridFunction& beta, const LinearOperatorSpec& T) {
  return {-apply(adjoint(T), beta), beta};
}

double duality_pairing(const GridPair& x, const GridPair& y) {
  return inner(x.first, y.first) + inner(x.second, y.second);
}

}  // namespace stablab
