#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cadkit/error.hpp"

namespace cadkit {

using Integer = mpz_class;
using Rational = mpq_class;

/// n/d in canonical form (gmpxx does not canonicalize two-argument construction).
inline Rational make_rational(const Integer& n, const Integer& d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

/// Ordered list of variable names. Position 0 is the first coordinate (the one
/// projected onto last); the final position is the "last coordinate", the
/// variable eliminated first by projection.
class VarOrder {
 public:
  explicit VarOrder(std::vector<std::string> names);

  size_t size() const { return names_.size(); }
  const std::string& name(size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<size_t> index_of(std::string_view name) const;

  bool operator==(const VarOrder& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
};

using OrderPtr = std::shared_ptr<const VarOrder>;

OrderPtr make_order(std::vector<std::string> names);
/// Parses "a,b,c,x" (commas and/or whitespace).
OrderPtr parse_order(std::string_view text);

using Exponents = std::vector<uint32_t>;

/// Monomial order used for storage: lexicographic with the last variable most
/// significant. Negative when a < b.
int compare_exponents(const Exponents& a, const Exponents& b);
/// Display order (graded reverse lexicographic): higher total degree first,
/// then the smaller exponent of the last differing variable.
bool display_before(const Exponents& a, const Exponents& b);

/// Sparse multivariate polynomial with rational coefficients over a fixed
/// variable order. Terms are kept sorted ascending under compare_exponents and
/// never hold a zero coefficient; the zero polynomial has no terms.
class Polynomial {
 public:
  struct Term {
    Exponents exps;
    Rational coef;
  };

  explicit Polynomial(OrderPtr order);
  Polynomial(OrderPtr order, const Rational& constant);
  /// The single variable `var` (index into the order).
  static Polynomial variable(OrderPtr order, size_t var);
  static Polynomial from_terms(OrderPtr order, std::vector<Term> terms);

  const OrderPtr& order() const { return order_; }
  size_t num_vars() const { return order_->size(); }
  const std::vector<Term>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Value of a constant polynomial (0 for zero). Throws if not constant.
  Rational constant_value() const;

  /// Degree in `var` (-1 for the zero polynomial).
  int degree(size_t var) const;
  int total_degree() const;
  bool depends_on(size_t var) const { return degree(var) > 0; }
  /// 1 + highest variable index present; 0 for constants.
  size_t level() const;
  /// Highest variable index present. Requires a non-constant polynomial.
  size_t main_var() const;

  /// Coefficients of var^0 .. var^deg, each free of `var`. Zero polynomial gives {0}.
  std::vector<Polynomial> coefficients(size_t var) const;
  static Polynomial from_coefficients(const std::vector<Polynomial>& coeffs, size_t var);
  /// Leading coefficient in `var`.
  Polynomial leading_coefficient(size_t var) const;
  /// Leading coefficient in the storage monomial order.
  const Rational& leading_numeric() const;

  Polynomial derivative(size_t var) const;
  Polynomial substitute(size_t var, const Rational& value) const;
  /// Substitutes the first values.size() variables.
  Polynomial substitute_prefix(const std::vector<Rational>& values) const;
  Rational evaluate(const std::vector<Rational>& values) const;

  Polynomial pow(unsigned e) const;
  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }

  /// Multiplies by var^e.
  Polynomial shift(size_t var, unsigned e) const;

  /// Exact division; throws InvalidArgument when `d` does not divide.
  Polynomial divide_exact(const Polynomial& d) const;
  /// Non-throwing divisibility test; returns the quotient when `d` divides.
  std::optional<Polynomial> try_divide(const Polynomial& d) const;

  /// Scales to integer coefficients with gcd 1 and a positive first term in
  /// display order. Zero stays zero.
  Polynomial normalized() const;
  /// Same polynomial re-expressed over another order that names every
  /// variable this polynomial uses.
  Polynomial reorder(const OrderPtr& target) const;

  bool operator==(const Polynomial& o) const;
  /// Total order for use as a map key (variable orders must agree).
  std::strong_ordering operator<=>(const Polynomial& o) const;

  /// Deterministic text with terms in display order.
  std::string to_string() const;

 private:
  void check_same_order(const Polynomial& o) const;
  void normalize_terms();

  OrderPtr order_;
  std::vector<Term> terms_;
};

/// Parses polynomial text over `order`. Unknown identifiers raise OrderError.
Polynomial parse_polynomial(std::string_view text, const OrderPtr& order);

std::string to_string(const Rational& q);

}  // namespace cadkit
