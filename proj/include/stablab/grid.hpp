#pragma once

// Discrete function spaces on the circle [0,1) with normalized Lebesgue
// measure, sampled on n = 2^k uniform cells. Every grid function is bounded
// and therefore lies in every L^p at once.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stablab {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

bool is_power_of_two(std::size_t n);

// Throws DimensionError unless n = 2^k with k >= 1.
void require_grid_size(std::size_t n);

// Lebesgue exponent in [1, inf].
class Exponent {
 public:
  static Exponent finite(double p);
  static Exponent infinity();
  static Exponent one() { return finite(1.0); }

  bool is_infinite() const { return infinite_; }
  bool is_one() const { return !infinite_ && p_ == 1.0; }
  // +inf for the infinite exponent.
  double value() const;
  // Hoelder conjugate: 1 <-> inf, p <-> p/(p-1).
  Exponent conjugate() const;

  std::string to_string() const;
  static Exponent parse(const std::string& text);

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  Exponent(double p, bool infinite) : p_(p), infinite_(infinite) {}
  double p_;
  bool infinite_;
};

class GridFunction {
 public:
  explicit GridFunction(std::vector<double> values);

  static GridFunction zeros(std::size_t n);
  static GridFunction constant(std::size_t n, double value);
  // Samples fn at left cell endpoints i/n.
  static GridFunction sample(std::size_t n, const std::function<double(double)>& fn);

  std::size_t size() const { return values_.size(); }
  int log2_size() const;
  double cell_width() const { return 1.0 / static_cast<double>(values_.size()); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& vec() const { return values_; }

  GridFunction operator-() const;
  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double scale);

  friend bool operator==(const GridFunction&, const GridFunction&) = default;

 private:
  std::vector<double> values_;
};

GridFunction operator+(GridFunction lhs, const GridFunction& rhs);
GridFunction operator-(GridFunction lhs, const GridFunction& rhs);
GridFunction operator*(double scale, GridFunction f);

class GridSet {
 public:
  explicit GridSet(std::vector<std::uint8_t> membership);

  static GridSet empty(std::size_t n);
  static GridSet full(std::size_t n);
  // Cells [j/n, (j+1)/n) with begin <= j/n < end.
  static GridSet cells_in(std::size_t n, double begin, double end);

  std::size_t size() const { return membership_.size(); }
  bool contains(std::size_t cell) const { return membership_[cell] != 0; }
  std::size_t count() const;
  double measure() const;
  std::span<const std::uint8_t> membership() const { return membership_; }

  GridSet complement() const;
  GridSet& operator|=(const GridSet& other);

  friend bool operator==(const GridSet&, const GridSet&) = default;

 private:
  std::vector<std::uint8_t> membership_;
};

// [index 2^-level, (index+1) 2^-level)
struct DyadicInterval {
  int level = 0;
  std::int64_t index = 0;

  double left() const;
  double right() const;
  double length() const;
  DyadicInterval parent() const;
  DyadicInterval child(int which) const;
  bool contains(const DyadicInterval& other) const;
  bool disjoint(const DyadicInterval& other) const;

  // Cell range on an n-grid; requires 2^level <= n.
  std::size_t first_cell(std::size_t n) const;
  std::size_t cell_count(std::size_t n) const;

  friend auto operator<=>(const DyadicInterval&, const DyadicInterval&) = default;
};

double norm(const GridFunction& f, Exponent p);
// <f,g> = sum f_i g_i / n
double inner(const GridFunction& f, const GridFunction& g);
double mean(const GridFunction& f);
double max_abs_difference(const GridFunction& f, const GridFunction& g);

GridFunction mask(const GridFunction& f, const GridSet& set);
// Cells that meet the open interval of length factor*|q| sharing q's center,
// taken modulo 1. Saturates to the whole circle once factor*|q| >= 1.
GridSet dilate_interval(const DyadicInterval& q, double factor, std::size_t n);

}  // namespace stablab
