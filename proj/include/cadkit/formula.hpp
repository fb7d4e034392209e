#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cadkit/polynomial.hpp"

namespace cadkit {

enum class Rel { EQ, NE, LT, LE, GT, GE };
const char* rel_symbol(Rel r);
/// The relation obtained by swapping the operands.
Rel flip(Rel r);
Rel negate(Rel r);
bool rel_holds(Rel r, int sign);

enum class Quantifier { Exists, Forall };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable formula node.
///  Atom:      poly rel 0
///  RootAtom:  x_var rel RootOf_index(poly), the index-th real root of poly
///             in x_var over the values of the earlier variables
///  Quant:     quantifier var. args[0]
struct Formula {
  enum class Kind { True, False, Atom, RootAtom, And, Or, Not, Implies, Quant };
  Kind kind = Kind::True;
  Rel rel = Rel::EQ;
  Quantifier quantifier = Quantifier::Exists;
  size_t var = 0;
  int root_index = 0;
  std::optional<Polynomial> poly;
  std::vector<FormulaPtr> args;
};

FormulaPtr make_true();
FormulaPtr make_false();
FormulaPtr make_atom(Polynomial p, Rel r);
FormulaPtr make_root_atom(size_t var, Rel r, int index, Polynomial p);
/// Flattens nested conjunctions and drops True; empty gives True, one argument
/// is returned as is.
FormulaPtr make_and(std::vector<FormulaPtr> args);
FormulaPtr make_or(std::vector<FormulaPtr> args);
FormulaPtr make_not(FormulaPtr f);
FormulaPtr make_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr make_quantifier(Quantifier q, size_t var, FormulaPtr body);

struct ParsedFormula {
  OrderPtr order;
  FormulaPtr formula;
};

/// Grammar:
///   formula  := disj ('->' formula)?
///   disj     := conj ('\/' conj)*          conj := unary ('/\' unary)*
///   unary    := '~' unary | ('exists'|'forall') var (',' var)* '.' formula
///             | 'true' | 'false' | '(' formula ')' | relation
///   relation := side rel side (rel side)*  side := poly | RootOf_j(poly)
/// A chain a < b < c means a < b /\ b < c. When `order` is null the order is
/// inferred: free variables in order of appearance, then bound variables in a
/// prenex-compatible order with as few alternations as possible.
ParsedFormula parse_formula(std::string_view text, OrderPtr order = nullptr);

std::string to_string(const FormulaPtr& f, const OrderPtr& order);
bool equal(const FormulaPtr& a, const FormulaPtr& b);
FormulaPtr reorder(const FormulaPtr& f, const OrderPtr& source, const OrderPtr& target);

/// Distinct polynomials of ordinary atoms, in order of appearance.
std::vector<Polynomial> atom_polynomials(const FormulaPtr& f);
bool is_quantifier_free(const FormulaPtr& f);
/// Variables with a free occurrence, ascending.
std::vector<size_t> free_variables(const FormulaPtr& f);
FormulaPtr substitute(const FormulaPtr& f, size_t var, const Rational& value);
/// Truth of a quantifier-free formula at a rational point (missing trailing
/// coordinates count as 0).
bool evaluate_at(const FormulaPtr& f, const std::vector<Rational>& point);

struct Block {
  Quantifier kind;
  std::vector<size_t> vars;
};

struct PrenexFormula {
  OrderPtr order;
  /// Variables 0..free_count-1 are free; the rest are bound by the blocks.
  size_t free_count = 0;
  std::vector<Block> blocks;  // outermost first
  FormulaPtr matrix;

  size_t alternations() const { return blocks.empty() ? 0 : blocks.size() - 1; }
  FormulaPtr to_formula() const;
  /// Quantifier of variable v (v >= free_count).
  Quantifier kind_of(size_t v) const;
};

/// Prenex form in the given variable order. Raises InvalidArgument when a
/// variable is bound twice, occurs both free and bound, or when the order
/// places a bound variable before a free one or contradicts the nesting of
/// alternating quantifiers.
PrenexFormula prenex(const FormulaPtr& f, const OrderPtr& order);
/// An order in which prenex succeeds: the free variables keep their relative
/// order, bound variables follow with as few alternations as possible.
OrderPtr prenex_order(const FormulaPtr& f, const OrderPtr& order);

}  // namespace cadkit
