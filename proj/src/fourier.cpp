#include "fourier.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace stablab::detail {
namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// Plans are created once per size under a lock (the FFTW planner is not
// reentrant); execution through the new-array interface is thread-safe as
// long as every buffer comes from fftw_malloc.
const Plans& plans_for(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, Plans> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  FftwBuffer<double> real(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
  FftwBuffer<fftw_complex> spec(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1))));
  const int len = static_cast<int>(n);
  Plans p;
  p.forward = fftw_plan_dft_r2c_1d(len, real.get(), spec.get(), FFTW_ESTIMATE);
  p.backward = fftw_plan_dft_c2r_1d(len, spec.get(), real.get(), FFTW_ESTIMATE);
  return cache.emplace(n, p).first->second;
}

}  // namespace

void conjugate_function(std::span<const double> in, std::span<double> out) {
  const std::size_t n = in.size();
  const Plans& plans = plans_for(n);
  FftwBuffer<double> real(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
  FftwBuffer<fftw_complex> spec(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1))));
  std::memcpy(real.get(), in.data(), sizeof(double) * n);
  fftw_execute_dft_r2c(plans.forward, real.get(), spec.get());

  spec[0][0] = spec[0][1] = 0.0;
  spec[n / 2][0] = spec[n / 2][1] = 0.0;
  for (std::size_t j = 1; j < n / 2; ++j) {
    // (a + ib)(-i) = b - ia
    const double a = spec[j][0];
    const double b = spec[j][1];
    spec[j][0] = b;
    spec[j][1] = -a;
  }
  fftw_execute_dft_c2r(plans.backward, spec.get(), real.get());
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = real[i] * inv;
}

}  // namespace stablab::detail
