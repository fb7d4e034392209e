#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cadkit/polynomial.hpp"

namespace cadkit {

enum class ProjectionOperator { Collins, McCallum, EC, TTI };
const char* operator_name(ProjectionOperator op);
ProjectionOperator parse_operator(std::string_view name);

enum class Provenance { Input, Coefficient, Discriminant, Resultant, Content };
const char* provenance_name(Provenance p);

struct ProjectionFactor {
  Polynomial poly;
  Provenance kind;
  std::vector<Polynomial> parents;
};
/// Unreduced output of one projection step, in generation order. Constants
/// are dropped.
using RawProjection = std::vector<ProjectionFactor>;

struct ProjectionCounts {
  size_t coefficients = 0, discriminants = 0, resultants = 0;
};
ProjectionCounts count_factors(const RawProjection& raw);

/// A disjunct of a formula: an optional equational constraint and the other
/// polynomials it mentions.
struct Clause {
  std::optional<Polynomial> equation;
  std::vector<Polynomial> others;
};

// Raw steps. Inputs are polynomials of positive degree in `var` (normally
// square-free basis elements).

/// Leading coefficients down to the first nonzero constant one, the
/// discriminant of each polynomial of degree >= 2 and all pairwise resultants.
RawProjection mccallum_raw(const std::vector<Polynomial>& polys, size_t var);
/// Leading coefficients of all reducta with the psc sequences of each
/// reductum against its derivative and of reducta pairs.
RawProjection collins_raw(const std::vector<Polynomial>& polys, size_t var);
/// Projection relative to an equational constraint whose factors are
/// `equation`: their own reduced projection plus resultants with `others`.
RawProjection ec_raw(const std::vector<Polynomial>& equation, const std::vector<Polynomial>& others, size_t var);
/// Truth-table invariant projection for a list of clauses. Clauses with an
/// equational constraint contribute ec_raw plus cross resultants between
/// constraints; clauses without one contribute a full McCallum set and
/// resultants against every other clause's contribution.
RawProjection tti_raw(const std::vector<Clause>& clauses, size_t var);
/// Implicit constraint route: the product of the clause constraints used as a
/// single constraint, expanded multiplicatively.
RawProjection product_ec_raw(const std::vector<Clause>& clauses, size_t var);

/// Square-free bases per level of a set of polynomials after extracting
/// contents and dropping constants, sorted canonically.
std::vector<Polynomial> basis_of(const std::vector<Polynomial>& polys);
std::vector<Polynomial> basis_of(const RawProjection& raw);

std::vector<Polynomial> mccallum_step(const std::vector<Polynomial>& polys, size_t var);
std::vector<Polynomial> collins_step(const std::vector<Polynomial>& polys, size_t var);
std::vector<Polynomial> ec_step(const Polynomial& equation, const std::vector<Polynomial>& others, size_t var);
std::vector<Polynomial> tti_step(const std::vector<Clause>& clauses, size_t var);

struct ProjectedPolynomial {
  Polynomial poly;
  Provenance kind;
  std::vector<std::string> parents;
  /// Whether lifting over this level splits cylinders at its roots. Only
  /// top-level non-constraint polynomials under ec/tti are false.
  bool splitting = true;
};

struct ProjectionInput {
  OrderPtr order;
  std::vector<Polynomial> polys;
  /// Clause structure for ec/tti; ignored by the other operators.
  std::vector<Clause> clauses;
};

struct ProjectionLevels {
  OrderPtr order;
  ProjectionOperator op = ProjectionOperator::McCallum;
  /// levels[k] holds the square-free basis with main variable k.
  std::vector<std::vector<ProjectedPolynomial>> levels;
  std::vector<std::string> notes;
  /// Raw counts of the top step (before basis reduction).
  ProjectionCounts top_counts;
};

/// steps > 0 stops after that many eliminations; lower levels stay empty.
ProjectionLevels project_all(const ProjectionInput& input, ProjectionOperator op, size_t steps = 0);

}  // namespace cadkit
