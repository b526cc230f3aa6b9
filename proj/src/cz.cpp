#include "stablab/cz.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace stablab {
namespace {

// Pairwise sums over every dyadic interval, level by level; sums[l][i] covers
// DyadicInterval{l, i}.
std::vector<std::vector<double>> dyadic_sums(std::span<const double> x, bool absolute) {
  const int k = std::countr_zero(x.size());
  std::vector<std::vector<double>> sums(static_cast<std::size_t>(k) + 1);
  sums[k].assign(x.begin(), x.end());
  if (absolute) {
    for (double& v : sums[k]) v = std::fabs(v);
  }
  for (int l = k - 1; l >= 0; --l) {
    const auto& fine = sums[l + 1];
    auto& coarse = sums[l];
    coarse.resize(fine.size() / 2);
    for (std::size_t i = 0; i < coarse.size(); ++i) coarse[i] = fine[2 * i] + fine[2 * i + 1];
  }
  return sums;
}

constexpr double kRoundingSlack = 1e-12;

}  // namespace

double CzDecomposition::cube_measure() const {
  double m = 0.0;
  for (const auto& q : cubes) m += q.length();
  return m;
}

CzDecomposition cz_decompose(const GridFunction& f, double level, double dilation_factor) {
  if (!(level > 0.0) || !std::isfinite(level)) throw DomainError("CZ level must be positive");
  const std::size_t n = f.size();
  const int k = f.log2_size();
  const auto abs_sums = dyadic_sums(f.values(), true);

  std::vector<DyadicInterval> cubes;
  // Depth-first, right child pushed first so cubes come out left to right.
  std::vector<DyadicInterval> stack{{0, 0}};
  while (!stack.empty()) {
    const DyadicInterval q = stack.back();
    stack.pop_back();
    const double cells = static_cast<double>(n >> q.level);
    const double average = abs_sums[q.level][static_cast<std::size_t>(q.index)] / cells;
    if (average > level) {
      cubes.push_back(q);
    } else if (q.level < k) {
      stack.push_back(q.child(1));
      stack.push_back(q.child(0));
    }
  }
  return cz_from_cubes(f, level, std::move(cubes), dilation_factor);
}

CzDecomposition cz_from_cubes(const GridFunction& f, double level, std::vector<DyadicInterval> cubes,
                              double dilation_factor) {
  const std::size_t n = f.size();
  const auto signed_sums = dyadic_sums(f.values(), false);
  std::vector<double> good(f.vec());
  std::vector<double> bad(n, 0.0);
  GridSet omega = GridSet::empty(n);
  for (const auto& q : cubes) {
    const std::size_t first = q.first_cell(n);
    const std::size_t count = q.cell_count(n);
    // One-cell cubes keep g = f there, so h = 0.
    if (count > 1) {
      const double avg = signed_sums[q.level][static_cast<std::size_t>(q.index)] / static_cast<double>(count);
      for (std::size_t i = first; i < first + count; ++i) {
        good[i] = avg;
        bad[i] = f[i] - avg;
      }
    }
    omega |= dilate_interval(q, dilation_factor, n);
  }
  return {level, std::move(cubes), GridFunction(std::move(good)), GridFunction(std::move(bad)), std::move(omega),
          dilation_factor};
}

bool CzCheckReport::all_ok() const {
  bool ok = sum_ok && cube_mean_ok && bad_outside_ok && sup_ok && cube_measure_ok && good_l1_ok && disjoint_ok &&
            maximal_ok && omega_ok;
  for (const auto& b : lp_bounds) ok = ok && b.ok;
  return ok;
}

CzCheckReport verify_cz(const CzDecomposition& d, const GridFunction& f, const std::vector<double>& exponents) {
  const std::size_t n = f.size();
  if (d.good.size() != n || d.bad.size() != n || d.omega.size() != n) {
    throw ConsistencyError("CZ decomposition has a different grid size than f");
  }
  const double scale = 1.0 + norm(f, Exponent::infinity());
  CzCheckReport r;
  for (std::size_t i = 0; i < n; ++i) {
    r.sum_residual = std::max(r.sum_residual, std::fabs(d.good[i] + d.bad[i] - f[i]));
  }
  if (r.sum_residual > 1e-6 * scale) throw ConsistencyError("CZ decomposition was not produced from this f");
  r.sum_ok = r.sum_residual <= kRoundingSlack * scale;

  std::vector<std::uint8_t> covered(n, 0);
  r.disjoint_ok = true;
  r.maximal_ok = true;
  for (const auto& q : d.cubes) {
    const std::size_t first = q.first_cell(n);
    const std::size_t count = q.cell_count(n);
    double h_sum = 0.0;
    for (std::size_t i = first; i < first + count; ++i) {
      if (covered[i] != 0) r.disjoint_ok = false;
      covered[i] = 1;
      h_sum += d.bad[i];
    }
    r.max_cube_mean = std::max(r.max_cube_mean, std::fabs(h_sum / static_cast<double>(count)));
    if (q.level > 0) {
      const DyadicInterval up = q.parent();
      const std::size_t pf = up.first_cell(n);
      const std::size_t pc = up.cell_count(n);
      double abs_sum = 0.0;
      for (std::size_t i = pf; i < pf + pc; ++i) abs_sum += std::fabs(f[i]);
      if (abs_sum / static_cast<double>(pc) > d.level * (1.0 + kRoundingSlack)) r.maximal_ok = false;
    }
  }
  r.cube_mean_ok = r.max_cube_mean <= kRoundingSlack * scale;

  r.bad_outside_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (covered[i] == 0 && d.bad[i] != 0.0) r.bad_outside_ok = false;
  }

  r.f_l1 = norm(f, Exponent::one());
  r.good_l1 = norm(d.good, Exponent::one());
  r.good_l1_ok = r.good_l1 <= r.f_l1 * (1.0 + kRoundingSlack);

  r.good_sup = norm(d.good, Exponent::infinity());
  r.sup_bound_applies = d.level >= r.f_l1;
  r.sup_ok = !r.sup_bound_applies || r.good_sup <= 2.0 * d.level * (1.0 + kRoundingSlack);

  r.cube_measure = d.cube_measure();
  r.cube_measure_bound = r.f_l1 / d.level;
  r.cube_measure_ok = r.cube_measure <= r.cube_measure_bound * (1.0 + kRoundingSlack);

  r.omega_measure = d.omega.measure();
  r.omega_bound = std::min(1.0, d.dilation_factor * r.f_l1 / d.level) +
                  static_cast<double>(d.cubes.size()) * 2.0 / static_cast<double>(n);
  r.omega_ok = r.omega_measure <= r.omega_bound * (1.0 + kRoundingSlack);

  for (double p : exponents) {
    LpGoodBound b;
    b.p = p;
    const double gp = norm(d.good, Exponent::finite(p));
    b.lhs = std::pow(gp, p);
    b.rhs = std::pow(2.0 * d.level, p - 1.0) * r.f_l1;
    b.ok = !r.sup_bound_applies || b.lhs <= b.rhs * (1.0 + 1e-10);
    r.lp_bounds.push_back(b);
  }
  return r;
}

}  // namespace stablab
