#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cadkit/polynomial.hpp"

namespace cadkit {

enum class Sign : int { Negative = -1, Zero = 0, Positive = 1 };
Sign sign_of(const Rational& q);
inline int to_int(Sign s) { return static_cast<int>(s); }
const char* sign_symbol(Sign s);  // "-", "0", "+"

struct Interval {
  enum class Kind { Open, Point };
  Kind kind = Kind::Point;
  Rational lo, hi;
};

/// A real root of `defining` (square-free in its main variable at the
/// relevant base point) isolated by an open interval, or given exactly by a
/// point interval.
class RealAlgebraicNumber {
 public:
  RealAlgebraicNumber(Polynomial defining, size_t var, Rational lo, Rational hi);
  static RealAlgebraicNumber exact(const Rational& value, const OrderPtr& order, size_t var);

  const Polynomial& defining() const { return *defining_; }
  const std::shared_ptr<const Polynomial>& defining_ptr() const { return defining_; }
  size_t var() const { return var_; }
  const Interval& interval() const { return iso_; }
  bool is_exact() const { return iso_.kind == Interval::Kind::Point; }
  const Rational& exact_value() const;

  /// "root of x^2 - 2 in (1, 2)", or the rational value for point intervals.
  std::string to_string() const;

 private:
  friend class PointContext;
  std::shared_ptr<const Polynomial> defining_;
  size_t var_;
  Interval iso_;
  // Sign of the defining polynomial just above the lower endpoint; fixed
  // for the lifetime of the number because no other root is inside.
  std::optional<Sign> lo_sign_;
};

using Coordinate = std::variant<Rational, RealAlgebraicNumber>;

/// Coordinates of a point, one per variable of the order in sequence.
struct SamplePoint {
  std::vector<Coordinate> coords;
  size_t size() const { return coords.size(); }
};

bool is_rational(const Coordinate& c);
std::string coordinate_to_string(const Coordinate& c);
/// Decimal text of a rational rounded to `digits` places.
std::string decimal(const Rational& q, int digits = 6);

/// Working copy of a sample point supporting exact sign determination, root
/// isolation over the point, and comparison of algebraic numbers lying over
/// it. Intervals of coordinates are refined in place as needed.
class PointContext {
 public:
  PointContext() : cache_(1) {}
  explicit PointContext(const SamplePoint& s);

  size_t size() const { return slots_.size(); }
  const Coordinate& coord(size_t i) const { return slots_.at(i).c; }
  SamplePoint sample() const;

  void push(const Coordinate& c);
  void pop();

  /// Sign of f at the first n coordinates (default: all).
  Sign sign(const Polynomial& f);
  Sign sign(const Polynomial& f, size_t n);

  /// True when every coefficient of p in variable size() vanishes here.
  bool nullified(const Polynomial& p);

  struct Root {
    Coordinate value;
    unsigned multiplicity;
  };
  /// Real roots, ascending, of p viewed as a polynomial in variable size()
  /// over the current point. Throws InvalidArgument if p is nullified.
  std::vector<Root> roots(const Polynomial& p);

  /// Three-way comparison of two numbers lying over the current point
  /// (variable size()); both may be refined.
  int compare(Coordinate& a, Coordinate& b);
  int compare(Coordinate& a, const Rational& r);

  /// Smallest-denominator dyadic rational strictly between the bounds.
  Rational sample_between(Coordinate* lo, Coordinate* hi);

  /// Bisects an algebraic number over the current point (variable size()).
  /// It may become exact.
  void bisect(Coordinate& c);
  /// Refines until the isolating interval is narrower than `width`.
  void refine(Coordinate& c, const Rational& width);
  /// Rational within `width` of coordinate i.
  Rational approximate(size_t i, const Rational& width);

 private:
  struct Slot {
    Coordinate c;
  };
  struct Range {
    Rational lo, hi;
  };

  Polynomial reduce(const Polynomial& f, size_t n) const;
  Range enclosure(const Polynomial& f, size_t n) const;
  Range coord_range(size_t i) const;
  void refine_prefix(size_t n);
  void bisect_slot(size_t i);
  Sign lo_sign(RealAlgebraicNumber& r, size_t n);
  void bisect_over(Coordinate& c, size_t n);
  Sign sign_uncached(const Polynomial& f, size_t n);
  bool is_zero_at(const Polynomial& f, size_t n);
  Polynomial truncate(const Polynomial& f, size_t var);
  int gcd_degree(const Polynomial& a, const Polynomial& b, size_t var);
  int compare_rational(RealAlgebraicNumber& a, const Rational& r, size_t n);
  Integer floor_scaled(Coordinate& c, const Integer& scale);
  std::vector<Root> roots_univariate(const Polynomial& f, size_t var);
  std::vector<Root> roots_general(const Polynomial& f, size_t var);

  std::vector<Slot> slots_;
  std::vector<std::map<Polynomial, Sign>> cache_;
};

// Univariate interface: polynomials in a single variable (any position of
// the order).

/// Isolates the real roots of a square-free univariate polynomial, ascending.
/// Rational roots come back with point intervals.
std::vector<RealAlgebraicNumber> isolate_roots(const Polynomial& p);
RealAlgebraicNumber refine(const RealAlgebraicNumber& r, const Rational& width);
int compare(const RealAlgebraicNumber& a, const RealAlgebraicNumber& b);
Sign sign_at(const Polynomial& p, const RealAlgebraicNumber& r);
/// Rational strictly between the bounds with the smallest power-of-two
/// denominator; ties go to the smallest magnitude numerator, then to >= 0.
Rational choose_sample(const std::optional<RealAlgebraicNumber>& lo, const std::optional<RealAlgebraicNumber>& hi);
/// Signs of p', p'', ..., p^(deg p) at r.
std::vector<Sign> thom_encoding(const Polynomial& p, const RealAlgebraicNumber& r);

/// Sign of p at a sample point (p may use the first s.size() variables).
Sign sign_at(const Polynomial& p, const SamplePoint& s);
/// Decimal approximations of every coordinate of a sample point.
std::vector<std::string> approximate(const SamplePoint& s, int digits = 6);

}  // namespace cadkit
