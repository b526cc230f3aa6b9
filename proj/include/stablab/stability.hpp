#pragma once

// Stable near-minimizers for the couple (L^1, L^p).
//
// Given f and s, take the exact L^1 near-minimizer u1 (||u1||_p <= s), set
// u0 = f - u1, a = ||u0||_1, b = s and pick the CZ level lambda with
// lambda^{p-1} a = b^p. Splitting u0 = g + h at that level gives
// u = u1 + g with f - u = h exactly.
//
// On the circle the stopping time selects the root once a > lambda
// (equivalently s < a). The good part would then be the global mean of u0,
// whose L^p norm is not controlled by s, so in that regime the construction
// keeps g = 0, h = u0 and treats the whole circle as the exceptional set.

#include <optional>
#include <vector>

#include "stablab/cz.hpp"
#include "stablab/grid.hpp"
#include "stablab/operators.hpp"

namespace stablab {

inline constexpr double kDegenerateMass = 1e-12;

struct StabilityReport {
  double s = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double t = 0.0;
  double r = 0.0;
  double lambda = 0.0;
  double p = 2.0;
  double dist1_f = 0.0;
  double dist1_Tf = 0.0;
  double residual_f = 0.0;  // ||f - u||_1
  double residual_T = 0.0;  // ||Tf - Tu||_1
  double norm_u_p = 0.0;
  double ratio_p = 0.0;  // ||u||_p / s
  double ratio_f = 0.0;  // ||f - u||_1 / dist_1(f)
  double ratio_T = 0.0;  // ||Tf - Tu||_1 / (dist_1(f) + dist_1(Tf))
  std::size_t cube_count = 0;
  double omega_measure = 0.0;
  double long_range = 0.0;
  bool degenerate = false;  // a <= kDegenerateMass
  bool root_guard = false;
};

struct StableNearMinimizer {
  GridFunction u;
  GridFunction good;
  GridFunction bad;
  std::optional<CzDecomposition> cz;
  StabilityReport report;
};

// u0 = good + bad at the level fixed by lambda^{p-1} a = b^p, with the root
// guard described above. Exposed for the redecomposition and for tests.
struct LevelSplit {
  double lambda = 0.0;
  GridFunction good;
  GridFunction bad;
  GridSet omega;
  std::optional<CzDecomposition> cz;
  bool root_guard = false;
};

double bourgain_level(double a, double b, double p);
LevelSplit bourgain_split(const GridFunction& u0, double a, double b, double p,
                          double dilation_factor = kDefaultDilation);

StableNearMinimizer bourgain_construct(const GridFunction& f, const LinearOperatorSpec& op, double s, Exponent p);

struct AmbientSplit {
  GridFunction u0;
  GridFunction v0;
  GridFunction u1;
  GridFunction v1;
};

struct Redecomposition {
  GridFunction h;
  GridFunction Th;
  GridFunction w;
  GridFunction Tw;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double lambda = 0.0;
  bool root_guard = false;
  double ratio_h = 0.0;     // ||h||_1 / a
  double ratio_w = 0.0;     // ||w||_p / b
  double ratio_Tw = 0.0;    // ||Tw||_p / b
  double ratio_Th = 0.0;    // ||Th||_1 / (a + c)
  double holder_lhs = 0.0;  // ||Th||_{L^1(Omega)}
  double holder_rhs = 0.0;  // c + |Omega|^{1/p'} (||v1||_p + ||Tw||_p)
  bool holder_ok = false;
  double omega_measure = 0.0;
};

// (u, Tu) = (u0, v0) + (u1, v1) with u0, v0 in L^1 and u1, v1 in L^p becomes
// (u, Tu) = (h, Th) + (w, Tw) with w = u1 + g. Throws ConsistencyError if the
// split does not add up to (u, Tu).
Redecomposition kclosed_redecompose(const GridFunction& u, const LinearOperatorSpec& op, const AmbientSplit& split,
                                    Exponent p);

// f_k = bourgain_construct(f, T, s_k, p).u for increasing s_k.
std::vector<GridFunction> graph_approx_sequence(const GridFunction& f, const LinearOperatorSpec& op,
                                                const std::vector<double>& s_list, Exponent p);

struct GraphResiduals {
  std::vector<double> residual_f;  // ||f - f_k||_1
  std::vector<double> residual_T;  // ||Tf - Tf_k||_1
};

GraphResiduals graph_residuals(const GridFunction& f, const LinearOperatorSpec& op,
                               const std::vector<GridFunction>& terms);

}  // namespace stablab
