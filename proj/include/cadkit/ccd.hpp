#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cadkit/cad.hpp"

namespace cadkit {

/// Node of a complex cylindrical decomposition tree. A node at level k fixes
/// the cell of C^k obtained from its parent's cell by a constraint on
/// variable k-1 (0-based). The root has level 0 and no constraint.
struct CCDNode {
  enum class Kind { Root, Equation, Complement, Whole };
  Kind kind = Kind::Root;
  /// Equation nodes only.
  std::optional<Polynomial> poly;
  size_t level = 0;
  std::vector<CCDNode> children;
  /// Inserted by parse_tree for a level the text skipped.
  bool implicit = false;
};

struct CCDTree {
  OrderPtr order;
  CCDNode root;
  /// Polynomials the realized CAD is sign-invariant for.
  std::vector<Polynomial> tracked;

  /// Cells of the complex decomposition (leaves before the implicit
  /// WholeSpace chains that pad short branches to full depth).
  size_t leaf_count() const;
};

/// Reads
///   (ccd (order a b c x) (track <poly>)* (root <node>*))
///   <node> := (node (eq <poly>) <node>*) | (node (neq) <node>*) | (node (any) <node>*)
/// ';' starts a comment. Children whose equations have a later main variable
/// than the next level are hung below implicit WholeSpace nodes, and short
/// branches are padded to depth n. Sibling sets must be r >= 1 equations
/// with one (neq), or a single (any); equations must be square-free and
/// pairwise coprime in their common main variable.
CCDTree parse_tree(std::string_view text);
/// Same structural checks on a tree built in code.
void check_tree(const CCDTree& tree);

/// "a = 0 / b != 0 / b*x + c = 0"
std::string node_label(const CCDNode& parent, const CCDNode& child);

struct SeparationReport {
  bool ok = true;
  size_t nodes_checked = 0;
  size_t probes = 0;
  std::vector<std::string> violations;
  /// Cells where no probe point satisfying the branch constraints was found.
  std::vector<std::string> search_failures;
};

/// At random rational points of each cell that has equation children, checks
/// that their leading coefficients do not vanish and that the instantiated
/// polynomials are square-free and pairwise coprime.
SeparationReport validate_separation(const CCDTree& tree, int probes_per_cell = 3, unsigned seed = 1,
                                     int attempts = 100);

class SeparationError : public Error {
 public:
  SeparationError(const std::string& what, std::string path)
      : Error(what + " on branch " + path), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct Realization {
  CAD cad;
  /// nodes[k][i] is the tree node that cell i of level k+1 came from. Points
  /// into the tree passed to make_semialgebraic.
  std::vector<std::vector<const CCDNode*>> nodes;
};

/// Real CAD of R^n refining the tree: over each real cell the real roots of
/// the child equations split the line; sections belong to their equation,
/// sectors to the complement. Raises SeparationError when a leading
/// coefficient vanishes at a sample or two sibling equations share a root.
Realization make_semialgebraic(const CCDTree& tree, unsigned jobs = 1);

}  // namespace cadkit
