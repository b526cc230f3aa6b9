#pragma once

// Dyadic Calderon-Zygmund decomposition on the circle.
//
// Stopping time from the root: an interval is selected the first time the
// average of |f| over it exceeds the level (strict inequality). On a selected
// cube the good part is the average of f and the bad part is the remainder;
// off the cubes g = f and h = 0. Omega is the union of the dilated cubes.
//
// If ||f||_1 > level the root itself is selected and g is the global mean, so
// the bound |g| <= 2 level only holds when level >= ||f||_1.

#include <vector>

#include "stablab/grid.hpp"

namespace stablab {

inline constexpr double kDefaultDilation = 10.0;

struct CzDecomposition {
  double level = 0.0;
  std::vector<DyadicInterval> cubes;  // maximal, disjoint, left to right
  GridFunction good;
  GridFunction bad;
  GridSet omega;
  double dilation_factor = kDefaultDilation;

  double cube_measure() const;
};

CzDecomposition cz_decompose(const GridFunction& f, double level, double dilation_factor = kDefaultDilation);

// Rebuilds g, h and omega from a stored cube family.
CzDecomposition cz_from_cubes(const GridFunction& f, double level, std::vector<DyadicInterval> cubes,
                              double dilation_factor = kDefaultDilation);

struct LpGoodBound {
  double p = 2.0;
  double lhs = 0.0;  // ||g||_p^p
  double rhs = 0.0;  // (2 level)^{p-1} ||f||_1
  bool ok = false;
};

struct CzCheckReport {
  double sum_residual = 0.0;  // max |g + h - f|
  bool sum_ok = false;
  double max_cube_mean = 0.0;  // max over cubes of |mean of h|
  bool cube_mean_ok = false;
  bool bad_outside_ok = false;
  double good_sup = 0.0;
  bool sup_bound_applies = false;  // level >= ||f||_1
  bool sup_ok = false;             // vacuous when the bound does not apply
  double cube_measure = 0.0;
  double cube_measure_bound = 0.0;  // ||f||_1 / level
  bool cube_measure_ok = false;
  double good_l1 = 0.0;
  double f_l1 = 0.0;
  bool good_l1_ok = false;
  bool disjoint_ok = false;
  bool maximal_ok = false;
  double omega_measure = 0.0;
  double omega_bound = 0.0;
  bool omega_ok = false;
  std::vector<LpGoodBound> lp_bounds;

  bool all_ok() const;
};

// Checks every structural invariant of d against f. Throws ConsistencyError
// if d was evidently not produced from f.
CzCheckReport verify_cz(const CzDecomposition& d, const GridFunction& f, const std::vector<double>& exponents = {});

}  // namespace stablab
