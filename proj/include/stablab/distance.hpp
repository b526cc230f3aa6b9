#pragma once

// Distance functionals from f to the radius-s ball of L^p, measured either in
// L^1 or in L^inf. Both problems attain their infimum on a finite grid, and
// both minimizers are governed by a single uniform threshold:
//   L^1   : the hard clip sign(f) min(|f|, tau), tau as large as the ball allows
//   L^inf : the soft threshold sign(f) (|f| - eps)_+, eps as small as the ball allows

#include "stablab/grid.hpp"

namespace stablab {

struct DistanceResult {
  double value = 0.0;
  GridFunction minimizer;
  double s = 0.0;
  Exponent p = Exponent::finite(2.0);
  Exponent ambient = Exponent::one();
  // tau (clip level) for the L^1 distance, eps (shrink level) for L^inf.
  double threshold = 0.0;
};

inline constexpr double kThresholdTolerance = 1e-12;
inline constexpr int kMaxBisectionSteps = 200;

DistanceResult dist_l1_to_lp_ball(const GridFunction& f, double s, Exponent p);
DistanceResult dist_linf_to_lp_ball(const GridFunction& f, double s, Exponent p);

// Dispatches on ambient, which must be L^1 or L^inf.
DistanceResult distance(const GridFunction& f, double s, Exponent p, Exponent ambient);
GridFunction near_minimizer(const GridFunction& f, double s, Exponent p, Exponent ambient);

GridFunction hard_clip(const GridFunction& f, double tau);
GridFunction soft_threshold(const GridFunction& f, double eps);

}  // namespace stablab
