#include <algorithm>
#include <cmath>
#include <vector>

#include "stablab/oracle.hpp"

namespace stablab::oracle {
namespace {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

double objective(const GridFunction& f, const Vec& g, Exponent ambient) {
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = std::fabs(f[i] - g[i]);
    acc = ambient.is_infinite() ? std::max(acc, d) : acc + d;
  }
  return ambient.is_infinite() ? acc : acc / static_cast<double>(g.size());
}

double lp_norm(const Vec& g, double p) {
  double acc = 0.0;
  for (double x : g) acc += std::pow(std::fabs(x), p);
  return std::pow(acc / static_cast<double>(g.size()), 1.0 / p);
}

}  // namespace

double brute_force_distance(const GridFunction& f, double s, Exponent p, Exponent ambient) {
  const std::size_t m = f.size();
  if (m > kMaxOracleSize) throw ScaleError("brute-force distance is limited to n <= 8");
  if (!(s >= 0.0)) throw DomainError("ball radius must be >= 0");
  if (!ambient.is_one() && !ambient.is_infinite()) throw DomainError("ambient must be L^1 or L^inf");
  if (s == 0.0) return objective(f, Vec(m, 0.0), ambient);
  const double q = p.value();

  // |g_i| <= s m^{1/p} on the ball, so the ball of radius sqrt(m) s m^{1/p}
  // contains the feasible set.
  const double radius = 1.01 * std::sqrt(static_cast<double>(m)) * s * std::pow(static_cast<double>(m), 1.0 / q);
  Mat P(m, Vec(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) P[i][i] = radius * radius;
  Vec x(m, 0.0);
  double best = objective(f, x, ambient);

  const double dm = static_cast<double>(m);
  const int steps = static_cast<int>(2.0 * (dm + 1.0) * dm * std::log(1e13)) + 500;
  Vec e(m);
  Vec Pe(m);
  for (int it = 0; it < steps; ++it) {
    if (lp_norm(x, q) > s) {
      for (std::size_t i = 0; i < m; ++i) e[i] = std::copysign(std::pow(std::fabs(x[i]), q - 1.0), x[i]);
    } else {
      best = std::min(best, objective(f, x, ambient));
      std::fill(e.begin(), e.end(), 0.0);
      if (ambient.is_infinite()) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < m; ++i) {
          if (std::fabs(f[i] - x[i]) > std::fabs(f[arg] - x[arg])) arg = i;
        }
        const double d = f[arg] - x[arg];
        e[arg] = d > 0.0 ? -1.0 : (d < 0.0 ? 1.0 : 0.0);
      } else {
        for (std::size_t i = 0; i < m; ++i) {
          const double d = f[i] - x[i];
          e[i] = d > 0.0 ? -1.0 : (d < 0.0 ? 1.0 : 0.0);
        }
      }
    }
    double ePe = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      Pe[i] = 0.0;
      for (std::size_t j = 0; j < m; ++j) Pe[i] += P[i][j] * e[j];
      ePe += e[i] * Pe[i];
    }
    if (!(ePe > 0.0)) break;  // zero subgradient: x is optimal, or P degenerated
    const double root = std::sqrt(ePe);
    for (std::size_t i = 0; i < m; ++i) {
      Pe[i] /= root;
      x[i] -= Pe[i] / (dm + 1.0);
    }
    const double shrink = dm * dm / (dm * dm - 1.0);
    const double coeff = 2.0 / (dm + 1.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) {
        const double v = shrink * (P[i][j] - coeff * Pe[i] * Pe[j]);
        P[i][j] = v;
        P[j][i] = v;
      }
    }
  }
  return best;
}

}  // namespace stablab::oracle
