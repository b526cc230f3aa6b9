#include <algorithm>
#include <cmath>

#include "stablab/kernels.hpp"

namespace stablab::kernels {
namespace {

double scalar_sum_abs(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i]);
  return acc;
}

double scalar_sum_sq(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double scalar_max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

double scalar_dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double scalar_sum_abs_pow(const double* x, std::size_t n, double p, double inv_scale) {
  double acc = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i]) * inv_scale;
  } else if (p == 2.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double y = x[i] * inv_scale;
      acc += y * y;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double y = std::fabs(x[i]) * inv_scale;
      if (y > 0.0) acc += std::pow(y, p);
    }
  }
  return acc;
}

double scalar_sum_excess(const double* x, std::size_t n, double tau) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::max(std::fabs(x[i]) - tau, 0.0);
  return acc;
}

void scalar_clip(const double* x, double* out, std::size_t n, double tau) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::copysign(std::min(std::fabs(x[i]), tau), x[i]);
}

void scalar_shrink(const double* x, double* out, std::size_t n, double eps) {
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::fabs(x[i]) - eps;
    out[i] = m > 0.0 ? std::copysign(m, x[i]) : 0.0;
  }
}

constexpr KernelTable kScalar{
    "scalar",         scalar_sum_abs,    scalar_sum_sq, scalar_max_abs, scalar_dot,
    scalar_sum_abs_pow, scalar_sum_excess, scalar_clip,   scalar_shrink,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace stablab::kernels
