#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "stablab/kernels.hpp"

namespace stablab::kernels {
namespace {

#define STABLAB_AVX2 __attribute__((target("avx2,fma")))

STABLAB_AVX2 inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

STABLAB_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

STABLAB_AVX2 inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, swapped));
}

STABLAB_AVX2 double avx2_sum_abs(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, abs_pd(_mm256_loadu_pd(x + i)));
    acc1 = _mm256_add_pd(acc1, abs_pd(_mm256_loadu_pd(x + i + 4)));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += std::fabs(x[i]);
  return acc;
}

STABLAB_AVX2 double avx2_sum_sq(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d a = _mm256_loadu_pd(x + i);
    const __m256d b = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

STABLAB_AVX2 double avx2_max_abs(const double* x, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, abs_pd(_mm256_loadu_pd(x + i)));
  double r = hmax(m);
  for (; i < n; ++i) r = std::max(r, std::fabs(x[i]));
  return r;
}

STABLAB_AVX2 double avx2_dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

STABLAB_AVX2 double avx2_sum_abs_pow(const double* x, std::size_t n, double p, double inv_scale) {
  const __m256d s = _mm256_set1_pd(inv_scale);
  if (p == 1.0) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_mul_pd(abs_pd(_mm256_loadu_pd(x + i)), s));
    double r = hsum(acc);
    for (; i < n; ++i) r += std::fabs(x[i]) * inv_scale;
    return r;
  }
  if (p == 2.0) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      const __m256d y = _mm256_mul_pd(_mm256_loadu_pd(x + i), s);
      acc = _mm256_fmadd_pd(y, y, acc);
    }
    double r = hsum(acc);
    for (; i < n; ++i) {
      const double y = x[i] * inv_scale;
      r += y * y;
    }
    return r;
  }
  // No vector pow in AVX2; fall back to the libm loop.
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = std::fabs(x[i]) * inv_scale;
    if (y > 0.0) acc += std::pow(y, p);
  }
  return acc;
}

STABLAB_AVX2 double avx2_sum_excess(const double* x, std::size_t n, double tau) {
  const __m256d t = _mm256_set1_pd(tau);
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d e = _mm256_sub_pd(abs_pd(_mm256_loadu_pd(x + i)), t);
    acc = _mm256_add_pd(acc, _mm256_max_pd(e, zero));
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += std::max(std::fabs(x[i]) - tau, 0.0);
  return r;
}

STABLAB_AVX2 void avx2_clip(const double* x, double* out, std::size_t n, double tau) {
  const __m256d t = _mm256_set1_pd(tau);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d mag = _mm256_min_pd(abs_pd(v), t);
    _mm256_storeu_pd(out + i, _mm256_or_pd(mag, _mm256_and_pd(v, sign_mask)));
  }
  for (; i < n; ++i) out[i] = std::copysign(std::min(std::fabs(x[i]), tau), x[i]);
}

STABLAB_AVX2 void avx2_shrink(const double* x, double* out, std::size_t n, double eps) {
  const __m256d e = _mm256_set1_pd(eps);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d m = _mm256_sub_pd(abs_pd(v), e);
    const __m256d pos = _mm256_cmp_pd(m, zero, _CMP_GT_OQ);
    const __m256d signed_m = _mm256_or_pd(m, _mm256_and_pd(v, sign_mask));
    _mm256_storeu_pd(out + i, _mm256_and_pd(signed_m, pos));
  }
  for (; i < n; ++i) {
    const double m = std::fabs(x[i]) - eps;
    out[i] = m > 0.0 ? std::copysign(m, x[i]) : 0.0;
  }
}

constexpr KernelTable kAvx2{
    "avx2",         avx2_sum_abs,    avx2_sum_sq, avx2_max_abs, avx2_dot,
    avx2_sum_abs_pow, avx2_sum_excess, avx2_clip,   avx2_shrink,
};

}  // namespace

const KernelTable* avx2_table_unchecked() { return &kAvx2; }

}  // namespace stablab::kernels
