#pragma once

// Singular-integral-type operators on the periodic grid.
//
//   hilbert              conjugate-function multiplier -i sign(j); mode 0 and
//                        the Nyquist mode n/2 are sent to 0
//   haar                 martingale transform sum eps_Q <f, h_Q> h_Q over the
//                        n-1 Haar functions, signs eps_Q in {-1, +1}
//   identity_minus_mean  f - mean(f)
//
// An optional restriction set E multiplies by chi_E either after the operator
// (chi_E T) or before it (T chi_E). Taking adjoints moves the mask across.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stablab/cz.hpp"
#include "stablab/grid.hpp"

namespace stablab {

enum class OperatorKind { hilbert, haar, identity_minus_mean };

std::string to_string(OperatorKind kind);
OperatorKind parse_operator_kind(const std::string& name);

enum class MaskSide { output, input };

struct LinearOperatorSpec {
  OperatorKind kind = OperatorKind::hilbert;
  std::size_t n = 0;
  // Haar signs in heap order: interval (level l, index i) sits at 2^l + i - 1.
  std::vector<std::int8_t> signs;
  // +1 or -1; the adjoint of hilbert is -hilbert.
  int sign = 1;
  std::optional<GridSet> restriction;
  MaskSide restriction_side = MaskSide::output;

  static LinearOperatorSpec hilbert(std::size_t n);
  static LinearOperatorSpec haar(std::size_t n, std::vector<std::int8_t> signs);
  static LinearOperatorSpec haar_uniform(std::size_t n);
  // Signs drawn from a fixed-seed generator.
  static LinearOperatorSpec haar_random(std::size_t n, std::uint64_t seed);
  static LinearOperatorSpec identity_minus_mean(std::size_t n);

  // chi_E T
  LinearOperatorSpec restricted_to(GridSet set) const;

  friend bool operator==(const LinearOperatorSpec&, const LinearOperatorSpec&) = default;
};

GridFunction apply(const LinearOperatorSpec& op, const GridFunction& f);
LinearOperatorSpec adjoint(const LinearOperatorSpec& op);

// Unmasked kernels, exposed for tests.
GridFunction hilbert_transform(const GridFunction& f);
GridFunction haar_transform(const GridFunction& f, std::span<const std::int8_t> signs);

// ||T h||_{L^1(Omega^c)} / ||h||_1 for the bad part h of d; 0 when h = 0.
double long_range_ratio(const LinearOperatorSpec& op, const CzDecomposition& d);

// Lower estimate of ||T||_{p->p}: power iteration on T*T for p = 2, random
// probes otherwise.
double operator_norm_estimate(const LinearOperatorSpec& op, Exponent p, int trials, std::uint64_t seed = 7);

}  // namespace stablab
