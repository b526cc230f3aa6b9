#pragma once

// Data-parallel inner loops shared by the norm, thresholding and CZ code.
// A scalar reference table is always available; an AVX2 table is selected at
// runtime when the CPU supports it. Setting STABLAB_KERNELS=scalar in the
// environment forces the reference path.

#include <cstddef>
#include <span>

namespace stablab::kernels {

struct KernelTable {
  const char* name;
  double (*sum_abs)(const double* x, std::size_t n);
  double (*sum_sq)(const double* x, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum (x_i * inv_scale)^p over |x_i|; p >= 1
  double (*sum_abs_pow)(const double* x, std::size_t n, double p, double inv_scale);
  // sum max(|x_i| - tau, 0)
  double (*sum_excess)(const double* x, std::size_t n, double tau);
  // out_i = sign(x_i) min(|x_i|, tau)
  void (*clip)(const double* x, double* out, std::size_t n, double tau);
  // out_i = sign(x_i) max(|x_i| - eps, 0)
  void (*shrink)(const double* x, double* out, std::size_t n, double eps);
};

const KernelTable& scalar_table();
// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_table();
const KernelTable& active();

inline double sum_abs(std::span<const double> x) { return active().sum_abs(x.data(), x.size()); }
inline double sum_sq(std::span<const double> x) { return active().sum_sq(x.data(), x.size()); }
inline double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline double sum_abs_pow(std::span<const double> x, double p, double inv_scale) {
  return active().sum_abs_pow(x.data(), x.size(), p, inv_scale);
}
inline double sum_excess(std::span<const double> x, double tau) {
  return active().sum_excess(x.data(), x.size(), tau);
}
inline void clip(std::span<const double> x, std::span<double> out, double tau) {
  active().clip(x.data(), out.data(), x.size(), tau);
}
inline void shrink(std::span<const double> x, std::span<double> out, double eps) {
  active().shrink(x.data(), out.data(), x.size(), eps);
}

}  // namespace stablab::kernels
