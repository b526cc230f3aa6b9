#pragma once

// Seeded generator with platform-independent real and integer draws
// (std::uniform_real_distribution output differs between standard libraries).

#include <cstdint>
#include <cmath>
#include <random>

namespace stablab {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : engine_() % bound; }
  int sign() { return (engine_() >> 63) != 0 ? 1 : -1; }
  double normal() {
    // Box-Muller on the portable uniform draws.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace stablab
