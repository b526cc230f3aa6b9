#include "stablab/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "stablab/kernels.hpp"

namespace stablab {

bool is_power_of_two(std::size_t n) { return n != 0 && std::has_single_bit(n); }

void require_grid_size(std::size_t n) {
  if (n < 2 || !is_power_of_two(n)) {
    throw DimensionError("grid size must be a power of two >= 2, got " + std::to_string(n));
  }
}

// ---------------------------------------------------------------- Exponent

Exponent Exponent::finite(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw DomainError("exponent must be a finite real >= 1");
  }
  return Exponent(p, false);
}

Exponent Exponent::infinity() { return Exponent(std::numeric_limits<double>::infinity(), true); }

double Exponent::value() const { return p_; }

Exponent Exponent::conjugate() const {
  if (infinite_) return one();
  if (p_ == 1.0) return infinity();
  return Exponent(p_ / (p_ - 1.0), false);
}

std::string Exponent::to_string() const {
  if (infinite_) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", p_);
  return buf;
}

Exponent Exponent::parse(const std::string& text) {
  if (text == "inf" || text == "infinity") return infinity();
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("cannot parse exponent '" + text + "'");
  }
  if (used != text.size()) throw DomainError("cannot parse exponent '" + text + "'");
  return finite(p);
}

// ---------------------------------------------------------------- GridFunction

GridFunction::GridFunction(std::vector<double> values) : values_(std::move(values)) {
  require_grid_size(values_.size());
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("grid function values must be finite");
  }
}

GridFunction GridFunction::zeros(std::size_t n) { return GridFunction(std::vector<double>(n, 0.0)); }

GridFunction GridFunction::constant(std::size_t n, double value) {
  return GridFunction(std::vector<double>(n, value));
}

GridFunction GridFunction::sample(std::size_t n, const std::function<double(double)>& fn) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = fn(static_cast<double>(i) / static_cast<double>(n));
  return GridFunction(std::move(v));
}

int GridFunction::log2_size() const { return std::countr_zero(values_.size()); }

GridFunction GridFunction::operator-() const {
  GridFunction out = *this;
  for (double& v : out.values_) v = -v;
  return out;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  if (other.size() != size()) throw DimensionError("grid size mismatch in +");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  if (other.size() != size()) throw DimensionError("grid size mismatch in -");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double scale) {
  for (double& v : values_) v *= scale;
  return *this;
}

GridFunction operator+(GridFunction lhs, const GridFunction& rhs) { return lhs += rhs; }
GridFunction operator-(GridFunction lhs, const GridFunction& rhs) { return lhs -= rhs; }
GridFunction operator*(double scale, GridFunction f) { return f *= scale; }

// ---------------------------------------------------------------- GridSet

GridSet::GridSet(std::vector<std::uint8_t> membership) : membership_(std::move(membership)) {
  require_grid_size(membership_.size());
  for (auto& m : membership_) m = m != 0 ? 1 : 0;
}

GridSet GridSet::empty(std::size_t n) { return GridSet(std::vector<std::uint8_t>(n, 0)); }
GridSet GridSet::full(std::size_t n) { return GridSet(std::vector<std::uint8_t>(n, 1)); }

GridSet GridSet::cells_in(std::size_t n, double begin, double end) {
  std::vector<std::uint8_t> m(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(n);
    m[j] = (x >= begin && x < end) ? 1 : 0;
  }
  return GridSet(std::move(m));
}

std::size_t GridSet::count() const {
  return static_cast<std::size_t>(std::count(membership_.begin(), membership_.end(), 1));
}

double GridSet::measure() const {
  return static_cast<double>(count()) / static_cast<double>(membership_.size());
}

GridSet GridSet::complement() const {
  GridSet out = *this;
  for (auto& m : out.membership_) m = 1 - m;
  return out;
}

GridSet& GridSet::operator|=(const GridSet& other) {
  if (other.size() != size()) throw DimensionError("grid set size mismatch");
  for (std::size_t i = 0; i < membership_.size(); ++i) membership_[i] |= other.membership_[i];
  return *this;
}

// ---------------------------------------------------------------- DyadicInterval

double DyadicInterval::length() const { return std::ldexp(1.0, -level); }
double DyadicInterval::left() const { return static_cast<double>(index) * length(); }
double DyadicInterval::right() const { return static_cast<double>(index + 1) * length(); }

DyadicInterval DyadicInterval::parent() const {
  if (level == 0) throw DomainError("the root interval has no parent");
  return {level - 1, index / 2};
}

DyadicInterval DyadicInterval::child(int which) const { return {level + 1, 2 * index + which}; }

bool DyadicInterval::contains(const DyadicInterval& other) const {
  if (other.level < level) return false;
  return (other.index >> (other.level - level)) == index;
}

bool DyadicInterval::disjoint(const DyadicInterval& other) const {
  return !contains(other) && !other.contains(*this);
}

std::size_t DyadicInterval::cell_count(std::size_t n) const {
  if ((std::size_t{1} << level) > n) throw DimensionError("dyadic interval finer than the grid");
  return n >> level;
}

std::size_t DyadicInterval::first_cell(std::size_t n) const {
  return static_cast<std::size_t>(index) * cell_count(n);
}

// ---------------------------------------------------------------- norms

double norm(const GridFunction& f, Exponent p) {
  const auto x = f.values();
  const double n = static_cast<double>(x.size());
  if (p.is_infinite()) return kernels::max_abs(x);
  if (p.is_one()) return kernels::sum_abs(x) / n;
  // Rescale by the sup so tiny and huge values neither underflow nor overflow.
  const double m = kernels::max_abs(x);
  if (m == 0.0) return 0.0;
  const double q = p.value();
  const double s = kernels::sum_abs_pow(x, q, 1.0 / m) / n;
  return q == 2.0 ? m * std::sqrt(s) : m * std::pow(s, 1.0 / q);
}

double inner(const GridFunction& f, const GridFunction& g) {
  if (f.size() != g.size()) throw DimensionError("grid size mismatch in inner product");
  return kernels::dot(f.values(), g.values()) / static_cast<double>(f.size());
}

double mean(const GridFunction& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += v;
  return acc / static_cast<double>(f.size());
}

double max_abs_difference(const GridFunction& f, const GridFunction& g) {
  if (f.size() != g.size()) throw DimensionError("grid size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::fabs(f[i] - g[i]));
  return m;
}

GridFunction mask(const GridFunction& f, const GridSet& set) {
  if (f.size() != set.size()) throw DimensionError("mask size mismatch");
  std::vector<double> out(f.vec());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!set.contains(i)) out[i] = 0.0;
  }
  return GridFunction(std::move(out));
}

GridSet dilate_interval(const DyadicInterval& q, double factor, std::size_t n) {
  require_grid_size(n);
  if (!(factor >= 1.0)) throw DomainError("dilation factor must be >= 1");
  const double len = factor * q.length();
  if (len >= 1.0) return GridSet::full(n);

  // Work in cell units: cell j meets the open interval (lo, hi) iff j < hi and
  // j + 1 > lo.
  const double nn = static_cast<double>(n);
  const double center = (static_cast<double>(q.index) + 0.5) * q.length();
  const double lo = (center - 0.5 * len) * nn;
  const double hi = (center + 0.5 * len) * nn;
  const auto first = static_cast<std::int64_t>(std::floor(lo));
  const auto last = static_cast<std::int64_t>(std::ceil(hi)) - 1;
  if (last - first + 1 >= static_cast<std::int64_t>(n)) return GridSet::full(n);

  std::vector<std::uint8_t> m(n, 0);
  const auto sn = static_cast<std::int64_t>(n);
  for (std::int64_t j = first; j <= last; ++j) m[static_cast<std::size_t>(((j % sn) + sn) % sn)] = 1;
  return GridSet(std::move(m));
}

}  // namespace stablab
