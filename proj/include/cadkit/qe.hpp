#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cadkit/cad.hpp"
#include "cadkit/formula.hpp"

namespace cadkit {

/// Truth of a quantifier-free matrix on every top-level cell, from the signs
/// recorded in the CAD. Raises InvalidArgument for polynomials the CAD does
/// not track and for indexed-root atoms.
std::vector<bool> evaluate_matrix(const CAD& cad, const FormulaPtr& matrix);

/// Truth values per level after eliminating the quantified variables
/// innermost first: result[m] holds one entry per cell of level m for
/// m = free_count..n (result[0] is the single cell of R^0).
std::vector<std::vector<bool>> propagate(const CAD& cad, const PrenexFormula& pf, const std::vector<bool>& top);

/// Disjunction of the descriptions of the true cells of level k. With
/// `merge`, runs of adjacent true cells in a stack become one constraint and
/// fully true stacks collapse onto their base cell.
FormulaPtr synthesize(const CAD& cad, size_t k, const std::vector<bool>& truths, DescribeMode mode, bool merge);

/// Clause structure of a matrix in disjunctive form: each conjunct's first
/// equation in the highest variable becomes the clause constraint. Empty when
/// the matrix is not a disjunction of conjunctions of atoms.
std::optional<std::vector<Clause>> clauses_of(const FormulaPtr& matrix);

struct QEConfig {
  CadConfig cad;
  DescribeMode language = DescribeMode::Extended;
  bool merge = false;
  /// Permit ec/tti when the formula has both free and quantified variables.
  bool allow_reduced_with_free = false;
};

struct Witness {
  /// Values of the leading quantifier block.
  std::vector<std::string> names;
  std::vector<Coordinate> values;
  bool counterexample = false;
};

struct QEResult {
  OrderPtr order;
  PrenexFormula prenex;
  FormulaPtr formula;
  /// Set for sentences.
  std::optional<bool> truth;
  /// A point for the leading existential block of a true sentence, or a
  /// counterexample for the leading universal block of a false one.
  std::optional<Witness> witness;
  std::optional<CAD> cad;
  size_t true_cells = 0;
  /// Matrix evaluation, propagation and formula synthesis.
  double propagation_ms = 0;
  std::vector<std::string> notes;
};

QEResult qe(const FormulaPtr& f, const OrderPtr& order, const QEConfig& cfg = {});

struct Decision {
  bool truth = false;
  /// Cells lifted before the answer was known.
  size_t cells = 0;
};

/// Truth of a sentence by depth-first lifting of the sign-invariant CAD of
/// its matrix, stopping a stack at the first true cell of an existential
/// variable or the first false cell of a universal one. Only the current
/// branch is kept in memory.
Decision decide(const FormulaPtr& sentence, const OrderPtr& order, const CadConfig& cfg = {});
/// Parses `text` (order inferred when `order` is null) and eliminates.
QEResult qe(std::string_view text, OrderPtr order = nullptr, const QEConfig& cfg = {});

}  // namespace cadkit
