#pragma once

// Reference solvers used to cross-check the threshold and splitting solvers.
// They share nothing with the code they check beyond grid norms and operator
// application, and are only meant for tiny grids.

#include <optional>

#include "stablab/grid.hpp"
#include "stablab/operators.hpp"

namespace stablab::oracle {

class ScaleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kMaxOracleSize = 8;

// inf { ||f - g||_ambient : ||g||_p <= s } by the central-cut ellipsoid
// method on the minimizer coordinates. ambient is L^1 or L^inf.
double brute_force_distance(const GridFunction& f, double s, Exponent p, Exponent ambient);

enum class Verdict { feasible, infeasible, ambiguous };

struct PenaltyVerdict {
  double min_penalty = 0.0;
  Verdict verdict = Verdict::ambiguous;
};

// Feasibility of
//   ||v||_2 <= c s, ||f - v||_inf <= c r, ||T*f - T*v||_inf <= c (t + r), v = 0 off E
// by accelerated gradient descent on the squared constraint violations.
PenaltyVerdict penalty_feasibility(const GridFunction& f, const LinearOperatorSpec& Tstar, double s, double r,
                                   double t, double c, const std::optional<GridSet>& support = std::nullopt);

}  // namespace stablab::oracle
