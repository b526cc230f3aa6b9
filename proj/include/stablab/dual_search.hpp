#pragma once

// Stable near-minimizers for the couple (L^inf, L^p), found by search.
//
// For an instance (f, T*, s, p) with r = 2 dist_inf(f, B_p(s)) and
// t = 2 dist_inf(T*f, B_p(s)) the constant c is feasible when some v has
//   ||v||_p <= c s,   ||f - v||_inf <= c r,   ||T*f - T*v||_inf <= c (t + r)
// (and v = 0 off E in support mode). The sets are nested in c, so the
// smallest feasible constant is located by bisection over a convex
// feasibility oracle.
//
// The oracle is a primal-dual (Chambolle-Pock) splitting with the auxiliary
// variable w = T* v: the primal step projects onto the L^p ball cut by the
// box around f, the dual step projects w onto the sup-norm box around T*f.
// Infeasibility is only reported with a certificate: either the first set is
// empty (checked exactly) or a dual vector y separates T*(ball cut by box)
// from the box around T*f, verified through a Lagrangian upper bound on the
// support function.

#include <optional>
#include <string>
#include <utility>

#include "stablab/grid.hpp"
#include "stablab/operators.hpp"

namespace stablab {

class SupportError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DualInstance {
  GridFunction f;
  LinearOperatorSpec Tstar;
  double s = 0.0;
  Exponent p = Exponent::finite(2.0);
  double r = 0.0;
  double t = 0.0;
  std::optional<GridSet> support;
  GridFunction Tstar_f;
};

// Builds T* = adjoint(T) (adjoint(chi_E T) = T* chi_E in support mode), T* f,
// r and t. Throws SupportError if f does not vanish off E.
DualInstance make_instance(const GridFunction& f, const LinearOperatorSpec& T, double s, Exponent p,
                           std::optional<GridSet> support = std::nullopt);

enum class FeasibilityStatus { feasible, infeasible, inconclusive };
std::string to_string(FeasibilityStatus status);

struct SolverOptions {
  double tol_feas = 1e-7;
  int max_iter = 10000;
  int check_every = 25;
};

// Primal/dual iterates carried between calls at nearby constants.
struct SolverState {
  std::vector<double> x;
  std::vector<double> y;
};

struct FeasibilityOutcome {
  FeasibilityStatus status = FeasibilityStatus::inconclusive;
  std::optional<GridFunction> v;
  int iterations = 0;
  // How the verdict was reached: "candidate", "iteration", "empty_ball_box",
  // "separation", "forced" or "budget".
  std::string reason;
};

FeasibilityOutcome feasible(const DualInstance& inst, double c, const SolverOptions& opts = {},
                            SolverState* warm = nullptr);

struct Residuals {
  double p_ratio = 0.0;  // ||v||_p / s
  double f_ratio = 0.0;  // ||f - v||_inf / r
  double T_ratio = 0.0;  // ||T*f - T*v||_inf / (t + r)
  bool support_ok = true;
};

// Direct norm evaluation, independent of the solver. A zero denominator gives
// ratio 0 when the numerator vanishes and +inf otherwise.
Residuals witness_residuals(const DualInstance& inst, const GridFunction& v);
// max of the three ratios (+inf if v leaves the support set).
double witness_constant(const DualInstance& inst, const GridFunction& v);
bool certify_witness(const DualInstance& inst, const GridFunction& v, double c, double tol_feas = 1e-7);

struct DualResult {
  double c_star = 0.0;
  double c_lower = 0.0;  // largest constant certified infeasible
  GridFunction v;
  Residuals residuals;
  int iterations = 0;
  int inconclusive_steps = 0;
  std::string status;  // "converged", "degenerate" or "inconclusive"
  bool certified = false;
};

DualResult min_constant(const DualInstance& inst, double tol, const SolverOptions& opts = {});

using GridPair = std::pair<GridFunction, GridFunction>;

// (-T* beta, beta): the annihilator of the graph {(g, Tg)}.
GridPair annihilator_pair(const GridFunction& beta, const LinearOperatorSpec& T);
// <x1, y1> + <x2, y2> with the normalized inner product.
double duality_pairing(const GridPair& x, const GridPair& y);

}  // namespace stablab
