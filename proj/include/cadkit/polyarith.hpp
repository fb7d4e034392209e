#pragma once

#include <string>
#include <vector>

#include "cadkit/polynomial.hpp"

namespace cadkit {

enum class ArithOp { Add, Sub, Mul };
Polynomial arith(const Polynomial& a, const Polynomial& b, ArithOp op);

struct PseudoDivision {
  Polynomial quotient;
  Polynomial remainder;
  /// lc(b)^exponent * a = quotient * b + remainder, with deg remainder < deg b.
  unsigned exponent;
};
PseudoDivision pseudo_divide(const Polynomial& a, const Polynomial& b, size_t var);
Polynomial prem(const Polynomial& a, const Polynomial& b, size_t var);

/// Resultant in `var` via the subresultant remainder sequence. Both inputs
/// must have positive degree in `var`.
Polynomial resultant(const Polynomial& p, const Polynomial& q, size_t var);
/// (-1)^(d(d-1)/2) res(p, p') / lc(p); requires degree >= 2 in `var`.
Polynomial discriminant(const Polynomial& p, size_t var);

/// j-th subresultant polynomial S_j(p, q) with respect to `var`, using the
/// determinant definition. Requires deg p >= deg q >= 1 and 0 <= j <= deg q;
/// S_{deg q} is returned as q itself.
Polynomial subresultant(const Polynomial& p, const Polynomial& q, size_t var, int j);
/// Principal subresultant coefficient psc_j(p, q); psc_0 is the resultant.
Polynomial principal_subresultant_coefficient(const Polynomial& p, const Polynomial& q, size_t var, int j);

/// Fraction-free determinant of a square matrix of polynomials.
Polynomial determinant(std::vector<std::vector<Polynomial>> m, const OrderPtr& order);

/// Multivariate gcd, normalized (primitive, integer, positive leading term).
Polynomial gcd(const Polynomial& p, const Polynomial& q);
/// gcd of the coefficients in `var`, normalized. For p free of `var` this is p normalized.
Polynomial content(const Polynomial& p, size_t var);
Polynomial primitive_part(const Polynomial& p, size_t var);
Polynomial squarefree_part(const Polynomial& p, size_t var);

/// Pairwise coprime, square-free, primitive polynomials (normalized) whose
/// product has the same zero set in `var` as the product of the input.
/// Inputs free of `var` are discarded.
std::vector<Polynomial> squarefree_basis(const std::vector<Polynomial>& polys, size_t var);

/// Same as squarefree_basis but also reports, for each basis element, the
/// indices of the input polynomials that it divides.
struct BasisElement {
  Polynomial poly;
  std::vector<size_t> sources;
};
std::vector<BasisElement> squarefree_basis_with_sources(const std::vector<Polynomial>& polys, size_t var);

/// Deterministic order for polynomial sets: level, degree in the main
/// variable, total degree, then printed form.
bool canonical_less(const Polynomial& a, const Polynomial& b);

}  // namespace cadkit
