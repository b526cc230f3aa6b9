#include "stablab/distance.hpp"

#include <cmath>
#include <vector>

#include "stablab/kernels.hpp"

namespace stablab {
namespace {

void check_arguments(double s, Exponent p) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("ball radius s must be finite and >= 0");
  if (p.is_infinite() || p.value() <= 1.0) throw DomainError("ball exponent must be finite and > 1");
}

// norm of sign(f) min(|f|, tau) or of the soft threshold, without keeping the result.
class ThresholdNorm {
 public:
  ThresholdNorm(const GridFunction& f, Exponent p) : f_(f), p_(p), buffer_(f.size()) {}

  double clipped(double tau) {
    kernels::clip(f_.values(), buffer_, tau);
    return lp();
  }
  double shrunk(double eps) {
    kernels::shrink(f_.values(), buffer_, eps);
    return lp();
  }

 private:
  double lp() const {
    const double m = kernels::max_abs(buffer_);
    if (m == 0.0) return 0.0;
    const double q = p_.value();
    const double s = kernels::sum_abs_pow(buffer_, q, 1.0 / m) / static_cast<double>(buffer_.size());
    return m * std::pow(s, 1.0 / q);
  }

  const GridFunction& f_;
  Exponent p_;
  std::vector<double> buffer_;
};

}  // namespace

GridFunction hard_clip(const GridFunction& f, double tau) {
  std::vector<double> out(f.size());
  kernels::clip(f.values(), out, tau);
  return GridFunction(std::move(out));
}

GridFunction soft_threshold(const GridFunction& f, double eps) {
  std::vector<double> out(f.size());
  kernels::shrink(f.values(), out, eps);
  return GridFunction(std::move(out));
}

DistanceResult dist_l1_to_lp_ball(const GridFunction& f, double s, Exponent p) {
  check_arguments(s, p);
  const double sup = norm(f, Exponent::infinity());
  const double n = static_cast<double>(f.size());
  if (norm(f, p) <= s) return {0.0, f, s, p, Exponent::one(), sup};
  if (s == 0.0) return {norm(f, Exponent::one()), GridFunction::zeros(f.size()), s, p, Exponent::one(), 0.0};

  // lo stays feasible (clip norm <= s), hi infeasible.
  ThresholdNorm eval(f, p);
  double lo = 0.0;
  double hi = sup;
  for (int it = 0; it < kMaxBisectionSteps && hi - lo > kThresholdTolerance; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (eval.clipped(mid) <= s) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double value = kernels::sum_excess(f.values(), lo) / n;
  return {value, hard_clip(f, lo), s, p, Exponent::one(), lo};
}

DistanceResult dist_linf_to_lp_ball(const GridFunction& f, double s, Exponent p) {
  check_arguments(s, p);
  const double sup = norm(f, Exponent::infinity());
  if (norm(f, p) <= s) return {0.0, f, s, p, Exponent::infinity(), 0.0};
  if (s == 0.0) return {sup, GridFunction::zeros(f.size()), s, p, Exponent::infinity(), sup};

  // hi stays feasible (shrunk norm <= s), lo infeasible; the smallest feasible
  // level is returned.
  ThresholdNorm eval(f, p);
  double lo = 0.0;
  double hi = sup;
  for (int it = 0; it < kMaxBisectionSteps && hi - lo > kThresholdTolerance; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (eval.shrunk(mid) <= s) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {hi, soft_threshold(f, hi), s, p, Exponent::infinity(), hi};
}

DistanceResult distance(const GridFunction& f, double s, Exponent p, Exponent ambient) {
  if (ambient.is_one()) return dist_l1_to_lp_ball(f, s, p);
  if (ambient.is_infinite()) return dist_linf_to_lp_ball(f, s, p);
  throw DomainError("distance ambient norm must be L^1 or L^inf");
}

GridFunction near_minimizer(const GridFunction& f, double s, Exponent p, Exponent ambient) {
  return distance(f, s, p, ambient).minimizer;
}

}  // namespace stablab
