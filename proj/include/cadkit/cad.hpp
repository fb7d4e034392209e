#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cadkit/formula.hpp"
#include "cadkit/projection.hpp"
#include "cadkit/realalg.hpp"

namespace cadkit {

enum class LiftingMode { Full, ECReduced };
enum class Fallback { Abort, RestartWithCollins };
enum class InvarianceKind { SignInvariant, TruthTableInvariant };
const char* lifting_name(LiftingMode m);
LiftingMode parse_lifting(std::string_view s);
const char* fallback_name(Fallback f);
Fallback parse_fallback(std::string_view s);

using CellIndex = std::vector<int>;
/// "(1,2,3)"
std::string index_to_string(const CellIndex& idx);

/// The j-th real root (1-based) of a registered bounding polynomial.
struct RootRef {
  size_t poly;
  int index;
  bool operator==(const RootRef&) const = default;
};

/// Position of a cell inside its stack, as a constraint on one variable.
struct Bound {
  enum class Kind { Whole, Below, Above, Between, Section };
  Kind kind = Kind::Whole;
  std::optional<RootRef> lower, upper;  // Section uses lower
  bool operator==(const Bound&) const = default;
};

struct Cell {
  CellIndex index;
  long parent = -1;  // position in the previous level, -1 at level 1
  SamplePoint sample;
  std::vector<Bound> bounds;  // one per level
  /// Signs of CAD::tracked; entries for polynomials above this level are Zero.
  std::vector<Sign> signs;
  int dimension = 0;
  /// Bounding polynomials vanishing on this section.
  std::vector<size_t> section_polys;
  bool tolerated_nullification = false;

  size_t level() const { return index.size(); }
  bool is_section() const { return !index.empty() && index.back() % 2 == 0; }
};

struct CadConfig {
  ProjectionOperator op = ProjectionOperator::McCallum;
  LiftingMode lifting = LiftingMode::Full;
  Fallback fallback = Fallback::Abort;
  unsigned jobs = 1;
  /// Also record signs of every projection polynomial.
  bool track_projection = false;
};

struct CadStats {
  double projection_ms = 0, base_ms = 0, lifting_ms = 0;
};

class CAD {
 public:
  OrderPtr order;
  InvarianceKind kind = InvarianceKind::SignInvariant;
  ProjectionOperator op = ProjectionOperator::McCallum;
  LiftingMode lifting = LiftingMode::Full;
  std::optional<ProjectionLevels> projection;
  std::vector<Polynomial> bound_polys;
  std::vector<Polynomial> tracked;
  /// levels[k] are the cells of R^(k+1).
  std::vector<std::vector<Cell>> levels;
  std::vector<std::string> notes;
  CadStats stats;

  size_t dimension() const { return levels.size(); }
  const std::vector<Cell>& cells(size_t k) const { return levels.at(k - 1); }
  const std::vector<Cell>& top() const { return levels.back(); }
  size_t full_dimensional_count() const;
  size_t register_bound(const Polynomial& p);
  size_t register_tracked(const Polynomial& p);
  /// Sign of p on a cell when p is a positive or negative rational multiple
  /// of a tracked polynomial.
  std::optional<Sign> tracked_sign(const Cell& c, const Polynomial& p) const;
};

/// One lifting step from the cells of R^k to R^(k+1).
struct LiftPlan {
  /// Registered bounding polynomials whose roots split the cylinder over a
  /// base cell (given with its position in the base level).
  std::function<std::vector<size_t>(const Cell&, size_t)> splitting;
  /// Raise NotWellOriented when a splitting polynomial vanishes identically
  /// over a base cell of positive dimension.
  bool check_nullification = true;
};

/// The single cell of R^0 (empty sample), used as the base of level 1.
Cell root_cell(size_t tracked_count);
std::vector<Cell> lift(CAD& cad, const std::vector<Cell>& base, const LiftPlan& plan, unsigned jobs);

CAD build_cad(const ProjectionInput& input, const CadConfig& cfg);

struct CheckReport {
  bool ok = true;
  std::vector<std::string> failures;
  void fail(std::string msg) {
    ok = false;
    failures.push_back(std::move(msg));
  }
};

/// Index prefixes and their constraint descriptions are in bijection, and
/// each cell's sample extends its parent's sample.
CheckReport cylindricity_check(const CAD& cad);
/// Every stack has odd size, contiguous indices, and sections at even indices.
CheckReport structure_check(const CAD& cad);

enum class DescribeMode { Extended, Thom };
/// Conjunction of the cell's per-level constraints. Bounds from polynomials
/// linear in their main variable become sign conditions; others use indexed
/// roots. Thom mode describes a final-level section of a nonlinear polynomial
/// by the polynomial vanishing and the signs of its derivatives.
FormulaPtr describe_cell(const CAD& cad, const Cell& cell, DescribeMode mode = DescribeMode::Extended);
/// Constraint "x_var rel (root of ref)" for a bound at level var of `cell`.
FormulaPtr root_constraint(const CAD& cad, const Cell& cell, size_t var, const RootRef& ref, Rel rel);

/// Equality of two coordinates over the same base point without refinement.
/// Algebraic numbers with different defining polynomials compare unequal
/// unless both are exact.
bool same_coordinate(const Coordinate& a, const Coordinate& b);

}  // namespace cadkit
