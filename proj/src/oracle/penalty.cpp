#include <algorithm>
#include <cmath>
#include <vector>

#include "stablab/oracle.hpp"

namespace stablab::oracle {
namespace {

struct Problem {
  GridFunction f;
  LinearOperatorSpec K;
  LinearOperatorSpec Kt;
  GridFunction Kf;
  double ball, box, obox;
  std::vector<std::uint8_t> keep;
};

double excess(double x, double bound) { return std::max(0.0, std::fabs(x) - bound); }

// Penalty value and gradient at v (v already zero off the support).
double evaluate(const Problem& pb, const std::vector<double>& v, std::vector<double>* grad) {
  const std::size_t n = v.size();
  const double dn = static_cast<double>(n);
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) sq += v[i] * v[i];
  const double nv = std::sqrt(sq);
  const double over = std::max(0.0, nv - pb.ball * std::sqrt(dn));
  double val = over * over / dn;

  const GridFunction Kv = apply(pb.K, GridFunction(v));
  std::vector<double> w(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double e = pb.Kf[j] - Kv[j];
    const double x = excess(e, pb.obox);
    val += x * x;
    w[j] = 2.0 * x * (e > 0.0 ? 1.0 : -1.0);
  }
  if (grad == nullptr) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = excess(pb.f[i] - v[i], pb.box);
      val += x * x;
    }
    return val;
  }
  const GridFunction Ktw = apply(pb.Kt, GridFunction(w));
  for (std::size_t i = 0; i < n; ++i) {
    const double d = pb.f[i] - v[i];
    const double x = excess(d, pb.box);
    val += x * x;
    double g = -2.0 * x * (d > 0.0 ? 1.0 : -1.0) - Ktw[i];
    if (over > 0.0) g += 2.0 * over / dn * v[i] / nv;
    (*grad)[i] = pb.keep[i] ? g : 0.0;
  }
  return val;
}

}  // namespace

PenaltyVerdict penalty_feasibility(const GridFunction& f, const LinearOperatorSpec& Tstar, double s, double r,
                                   double t, double c, const std::optional<GridSet>& support) {
  const std::size_t n = f.size();
  if (n > kMaxOracleSize) throw ScaleError("penalty oracle is limited to n <= 8");
  if (Tstar.n != n) throw DimensionError("operator size does not match f");
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(f[i]));
  if (scale == 0.0) return {0.0, Verdict::feasible};

  Problem pb{(1.0 / scale) * f, Tstar, adjoint(Tstar), GridFunction::zeros(n), c * s / scale, c * r / scale,
             c * (t + r) / scale, std::vector<std::uint8_t>(n, 1)};
  pb.Kf = apply(pb.K, pb.f);
  if (support) {
    if (support->size() != n) throw DimensionError("support size does not match f");
    const auto m = support->membership();
    pb.keep.assign(m.begin(), m.end());
  }

  // Gradient Lipschitz bound: 2/n (ball) + 2 (box) + 2 ||K||^2 with ||K|| <= 1.
  const double step = 1.0 / (2.0 / static_cast<double>(n) + 4.0);
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) x[i] = pb.keep[i] ? pb.f[i] : 0.0;
  std::vector<double> y = x;
  std::vector<double> g(n, 0.0);
  double best = evaluate(pb, x, nullptr);
  double prev = best;
  double momentum = 1.0;
  constexpr int kIterations = 40000;
  for (int it = 0; it < kIterations && best > 1e-22; ++it) {
    evaluate(pb, y, &g);
    std::vector<double> next = y;
    for (std::size_t i = 0; i < n; ++i) next[i] -= step * g[i];
    const double val = evaluate(pb, next, nullptr);
    best = std::min(best, val);
    if (val > prev) {
      // Restart the momentum when the objective goes up.
      momentum = 1.0;
      y = x;
      continue;
    }
    const double m1 = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    const double beta = (momentum - 1.0) / m1;
    for (std::size_t i = 0; i < n; ++i) y[i] = next[i] + beta * (next[i] - x[i]);
    x = std::move(next);
    prev = val;
    momentum = m1;
  }
  PenaltyVerdict out;
  out.min_penalty = best;
  if (best <= 1e-16) {
    out.verdict = Verdict::feasible;
  } else if (best >= 1e-9) {
    out.verdict = Verdict::infeasible;
  } else {
    out.verdict = Verdict::ambiguous;
  }
  return out;
}

}  // namespace stablab::oracle
