#include <cmath>
#include <vector>

#include "doctest.h"
#include "stablab/kernels.hpp"
#include "stablab/random.hpp"

using namespace stablab;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300}); }

}  // namespace

TEST_CASE("scalar reference kernels") {
  const auto& k = kernels::scalar_table();
  const std::vector<double> x{1.0, -2.0, 3.0, -4.0, 0.5};
  CHECK(k.sum_abs(x.data(), x.size()) == 10.5);
  CHECK(k.sum_sq(x.data(), x.size()) == 30.25);
  CHECK(k.max_abs(x.data(), x.size()) == 4.0);
  CHECK(k.dot(x.data(), x.data(), x.size()) == 30.25);
  CHECK(k.sum_excess(x.data(), x.size(), 2.0) == 3.0);
  CHECK(k.sum_abs_pow(x.data(), x.size(), 3.0, 0.5) == doctest::Approx((1.0 + 8.0 + 27.0 + 64.0 + 0.125) / 8.0));
  std::vector<double> out(x.size());
  k.clip(x.data(), out.data(), x.size(), 2.0);
  CHECK(out == std::vector<double>{1.0, -2.0, 2.0, -2.0, 0.5});
  k.shrink(x.data(), out.data(), x.size(), 2.0);
  CHECK(out == std::vector<double>{0.0, 0.0, 1.0, -2.0, 0.0});
}

TEST_CASE("avx2 kernels match the scalar reference") {
  const kernels::KernelTable* v = kernels::avx2_table();
  if (v == nullptr) {
    MESSAGE("AVX2 kernels unavailable on this machine; equivalence not exercised");
    return;
  }
  const auto& s = kernels::scalar_table();
  Rng rng(2024);
  // Lengths straddle the 4-wide vector blocks and the tail loop.
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 63u, 64u, 255u, 256u, 1024u, 1031u}) {
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<double> x(n), y(n);
      for (auto& a : x) a = rng.normal() * std::exp(3.0 * rng.normal());
      for (auto& a : y) a = rng.normal();
      CHECK(rel(v->sum_abs(x.data(), n), s.sum_abs(x.data(), n)) <= 1e-13);
      CHECK(rel(v->sum_sq(x.data(), n), s.sum_sq(x.data(), n)) <= 1e-13);
      CHECK(v->max_abs(x.data(), n) == s.max_abs(x.data(), n));
      CHECK(std::fabs(v->dot(x.data(), y.data(), n) - s.dot(x.data(), y.data(), n)) <=
            1e-13 * s.dot(x.data(), x.data(), n) + 1e-300);
      const double inv = 1.0 / s.max_abs(x.data(), n);
      for (double p : {1.0, 1.5, 2.0, 3.0, 7.25}) {
        CHECK(rel(v->sum_abs_pow(x.data(), n, p, inv), s.sum_abs_pow(x.data(), n, p, inv)) <= 1e-12);
      }
      const double tau = std::fabs(x[rng.below(n)]);
      CHECK(rel(v->sum_excess(x.data(), n, tau), s.sum_excess(x.data(), n, tau)) <= 1e-13);
      std::vector<double> a(n), b(n);
      v->clip(x.data(), a.data(), n, tau);
      s.clip(x.data(), b.data(), n, tau);
      CHECK(a == b);
      v->shrink(x.data(), a.data(), n, tau);
      s.shrink(x.data(), b.data(), n, tau);
      CHECK(a == b);
    }
  }
  // Zeros keep their sign convention.
  const std::vector<double> z{0.0, -0.0, 0.0, -0.0, 0.0};
  std::vector<double> a(5), b(5);
  v->shrink(z.data(), a.data(), 5, 0.0);
  s.shrink(z.data(), b.data(), 5, 0.0);
  for (int i = 0; i < 5; ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("active table honours the override") {
  const char* name = kernels::active().name;
  CHECK(name != nullptr);
  if (const char* env = std::getenv("STABLAB_KERNELS"); env != nullptr && std::string(env) == "scalar") {
    CHECK(std::string(name) == "scalar");
  }
}
