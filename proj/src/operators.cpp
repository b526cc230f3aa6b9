#include "stablab/operators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "fourier.hpp"
#include "stablab/random.hpp"

namespace stablab {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::hilbert:
      return "hilbert";
    case OperatorKind::haar:
      return "haar";
    case OperatorKind::identity_minus_mean:
      return "identity_minus_mean";
  }
  return "unknown";
}

OperatorKind parse_operator_kind(const std::string& name) {
  if (name == "hilbert") return OperatorKind::hilbert;
  if (name == "haar") return OperatorKind::haar;
  if (name == "identity_minus_mean") return OperatorKind::identity_minus_mean;
  throw DomainError("unknown operator kind '" + name + "'");
}

LinearOperatorSpec LinearOperatorSpec::hilbert(std::size_t n) {
  require_grid_size(n);
  LinearOperatorSpec op;
  op.kind = OperatorKind::hilbert;
  op.n = n;
  return op;
}

LinearOperatorSpec LinearOperatorSpec::haar(std::size_t n, std::vector<std::int8_t> signs) {
  require_grid_size(n);
  if (signs.size() != n - 1) throw DimensionError("haar transform needs n - 1 signs");
  for (auto s : signs) {
    if (s != 1 && s != -1) throw DomainError("haar signs must be +1 or -1");
  }
  LinearOperatorSpec op;
  op.kind = OperatorKind::haar;
  op.n = n;
  op.signs = std::move(signs);
  return op;
}

LinearOperatorSpec LinearOperatorSpec::haar_uniform(std::size_t n) {
  return haar(n, std::vector<std::int8_t>(n - 1, 1));
}

LinearOperatorSpec LinearOperatorSpec::haar_random(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::int8_t> signs(n - 1);
  for (auto& s : signs) s = static_cast<std::int8_t>(rng.sign());
  return haar(n, std::move(signs));
}

LinearOperatorSpec LinearOperatorSpec::identity_minus_mean(std::size_t n) {
  require_grid_size(n);
  LinearOperatorSpec op;
  op.kind = OperatorKind::identity_minus_mean;
  op.n = n;
  return op;
}

LinearOperatorSpec LinearOperatorSpec::restricted_to(GridSet set) const {
  if (set.size() != n) throw DimensionError("restriction set size mismatch");
  LinearOperatorSpec op = *this;
  op.restriction = std::move(set);
  op.restriction_side = MaskSide::output;
  return op;
}

GridFunction hilbert_transform(const GridFunction& f) {
  std::vector<double> out(f.size());
  detail::conjugate_function(f.values(), out);
  return GridFunction(std::move(out));
}

GridFunction haar_transform(const GridFunction& f, std::span<const std::int8_t> signs) {
  const std::size_t n = f.size();
  if (signs.size() != n - 1) throw DimensionError("haar transform needs n - 1 signs");
  const int k = f.log2_size();

  // sums[l][i] = sum of f over DyadicInterval{l, i}
  std::vector<std::vector<double>> sums(static_cast<std::size_t>(k) + 1);
  sums[k] = f.vec();
  for (int l = k - 1; l >= 0; --l) {
    sums[l].resize(std::size_t{1} << l);
    for (std::size_t i = 0; i < sums[l].size(); ++i) sums[l][i] = sums[l + 1][2 * i] + sums[l + 1][2 * i + 1];
  }

  // With psi_Q = chi_left - chi_right the component of f along psi_Q is
  // d_Q psi_Q, d_Q = (sum_left - sum_right) / |Q|_cells. Synthesis pushes the
  // signed coefficients down the tree.
  std::vector<double> acc(1, 0.0);
  for (int l = 0; l < k; ++l) {
    const std::size_t width = std::size_t{1} << l;
    const double cells = static_cast<double>(n >> l);
    std::vector<double> next(2 * width);
    for (std::size_t i = 0; i < width; ++i) {
      const double d = (sums[l + 1][2 * i] - sums[l + 1][2 * i + 1]) / cells;
      const double e = static_cast<double>(signs[width + i - 1]) * d;
      next[2 * i] = acc[i] + e;
      next[2 * i + 1] = acc[i] - e;
    }
    acc = std::move(next);
  }
  return GridFunction(std::move(acc));
}

namespace {

GridFunction apply_kernel(const LinearOperatorSpec& op, const GridFunction& f) {
  switch (op.kind) {
    case OperatorKind::hilbert:
      return hilbert_transform(f);
    case OperatorKind::haar:
      return haar_transform(f, op.signs);
    case OperatorKind::identity_minus_mean: {
      const double m = mean(f);
      std::vector<double> out(f.vec());
      for (double& v : out) v -= m;
      return GridFunction(std::move(out));
    }
  }
  throw DomainError("unknown operator kind");
}

}  // namespace

GridFunction apply(const LinearOperatorSpec& op, const GridFunction& f) {
  if (f.size() != op.n) throw DimensionError("operator and function grid sizes differ");
  const bool mask_input = op.restriction && op.restriction_side == MaskSide::input;
  const bool mask_output = op.restriction && op.restriction_side == MaskSide::output;
  GridFunction out = apply_kernel(op, mask_input ? mask(f, *op.restriction) : f);
  if (op.sign < 0) out *= -1.0;
  if (mask_output) out = mask(out, *op.restriction);
  return out;
}

LinearOperatorSpec adjoint(const LinearOperatorSpec& op) {
  LinearOperatorSpec adj = op;
  if (op.kind == OperatorKind::hilbert) adj.sign = -op.sign;
  if (op.restriction) {
    adj.restriction_side = op.restriction_side == MaskSide::output ? MaskSide::input : MaskSide::output;
  }
  return adj;
}

double long_range_ratio(const LinearOperatorSpec& op, const CzDecomposition& d) {
  const double bad_l1 = norm(d.bad, Exponent::one());
  if (bad_l1 == 0.0) return 0.0;
  const GridFunction tail = mask(apply(op, d.bad), d.omega.complement());
  return norm(tail, Exponent::one()) / bad_l1;
}

double operator_norm_estimate(const LinearOperatorSpec& op, Exponent p, int trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("trials must be >= 1");
  Rng rng(seed);
  const LinearOperatorSpec adj = adjoint(op);
  double best = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> v(op.n);
    for (double& x : v) x = rng.normal();
    GridFunction x(std::move(v));
    if (p.value() == 2.0) {
      for (int it = 0; it < 200; ++it) {
        GridFunction y = apply(adj, apply(op, x));
        const double ny = norm(y, p);
        if (ny == 0.0) break;
        x = (1.0 / ny) * std::move(y);
      }
    }
    const double nx = norm(x, p);
    if (nx > 0.0) best = std::max(best, norm(apply(op, x), p) / nx);
  }
  return best;
}

}  // namespace stablab
