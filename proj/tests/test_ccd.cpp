#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "cadkit/ccd.hpp"
#include "cadkit/error.hpp"
#include "oracles.hpp"

using namespace cadkit;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CCDTree parabola() { return parse_tree(slurp(std::string(CADKIT_FIXTURES) + "/parabola.ccd")); }

// Each cell's sample satisfies the constraints of every node on its branch.
void check_branches(const Realization& r, const CCDTree& t) {
  const CAD& cad = r.cad;
  for (size_t k = 0; k < cad.dimension(); ++k)
    for (size_t i = 0; i < cad.levels[k].size(); ++i) {
      const Cell& c = cad.levels[k][i];
      const CCDNode* node = r.nodes[k][i];
      const CCDNode* parent = k == 0 ? &t.root : r.nodes[k - 1][c.parent];
      if (node->kind == CCDNode::Kind::Equation) {
        CHECK(sign_at(*node->poly, c.sample) == Sign::Zero);
      } else if (node->kind == CCDNode::Kind::Complement) {
        for (const auto& s : parent->children)
          if (s.kind == CCDNode::Kind::Equation) CHECK(sign_at(*s.poly, c.sample) != Sign::Zero);
      }
    }
}

// Leaves of the tree whose branch has a real point, counted by the cells
// that realize them.
size_t realized_leaves(const Realization& r) {
  std::set<const CCDNode*> seen;
  for (auto* n : r.nodes.back()) seen.insert(n);
  return seen.size();
}

}  // namespace

TEST_CASE("parse the parabola tree") {
  auto t = parabola();
  CHECK(t.order->names() == std::vector<std::string>{"a", "b", "c", "x"});
  CHECK(t.leaf_count() == 8);
  REQUIRE(t.root.children.size() == 2);
  CHECK(t.root.children[0].kind == CCDNode::Kind::Equation);
  CHECK(t.root.children[0].poly->to_string() == "a");
  // The a != 0 branch skips b: an implicit whole-space node fills level 2.
  const CCDNode& nz = t.root.children[1];
  REQUIRE(nz.children.size() == 1);
  CHECK(nz.children[0].implicit);
  CHECK(nz.children[0].children[0].poly->to_string() == "b^2 - 4*a*c");
  REQUIRE(t.tracked.size() == 1);
}

TEST_CASE("tree parse errors") {
  CHECK_THROWS_AS(parse_tree("(ccd (order x) (root (node (eq x)) (node (eq x^2)) (node (neq))))"), InvalidArgument);
  CHECK_THROWS_AS(parse_tree("(ccd (order x) (root (node (eq x^2)) (node (neq))))"), InvalidArgument);
  CHECK_THROWS_AS(parse_tree("(ccd (order x y) (root (node (eq y) (node (eq x)) (node (neq))) (node (neq))))"),
                  InvalidArgument);
  CHECK_THROWS_AS(parse_tree("(ccd (order x y) (root (node (eq x)) (node (eq y)) (node (neq))))"), InvalidArgument);
  CHECK_THROWS_AS(parse_tree("(ccd (order x) (root (node (eq x))))"), InvalidArgument);
  CHECK_THROWS_AS(parse_tree("(ccd (order x) (root (node (any)) (node (neq))))"), InvalidArgument);
  CHECK_THROWS_AS(parse_tree("(ccd (order x) (root (node (eq x +)) (node (neq))))"), ParseError);
  CHECK_THROWS_AS(parse_tree("(ccd (root) (order x))"), ParseError);
  CHECK_THROWS_AS(parse_tree("(ccd (order x) (root (node (eq z)) (node (neq))))"), OrderError);
  try {
    parse_tree("(ccd (order x) (root (node (eq x^2 +)) (node (neq))))");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() >= 27);
  }
}

TEST_CASE("whole-space trees") {
  auto t = parse_tree("(ccd (order x y z) (root))");
  CHECK(t.leaf_count() == 1);
  auto r = make_semialgebraic(t);
  CHECK(r.cad.top().size() == 1);
  CHECK(r.cad.dimension() == 3);
  auto e = parse_tree("(ccd (order x y) (root (node (any) (node (any)))))");
  CHECK(e.leaf_count() == 1);
  CHECK(make_semialgebraic(e).cad.top().size() == 1);
  auto rep = validate_separation(t);
  CHECK(rep.ok);
  CHECK(rep.nodes_checked == 0);
}

TEST_CASE("depth-one tree") {
  auto t = parse_tree("(ccd (order x) (track x^2 - 2) (root (node (eq x^2 - 2)) (node (neq))))");
  CHECK(t.leaf_count() == 2);
  auto r = make_semialgebraic(t);
  REQUIRE(r.cad.top().size() == 5);
  CHECK(r.nodes[0][1]->kind == CCDNode::Kind::Equation);
  CHECK(r.nodes[0][2]->kind == CCDNode::Kind::Complement);
  CHECK(r.cad.top()[1].signs[0] == Sign::Zero);
  check_branches(r, t);
}

TEST_CASE("parabola tree realizes a 27-cell cad") {
  auto t = parabola();
  auto r = make_semialgebraic(t);
  CHECK(r.cad.top().size() == 27);
  CHECK(r.cad.cells(1).size() == 3);
  CHECK(cylindricity_check(r.cad).ok);
  CHECK(structure_check(r.cad).ok);
  check_branches(r, t);
  CHECK(realized_leaves(r) == 8);
  for (const auto& m : oracle::sign_mismatches(r.cad, 20, 3)) FAIL_CHECK(m);
  // Same cells with a worker pool.
  auto p = make_semialgebraic(t, 4);
  REQUIRE(p.cad.top().size() == 27);
  for (size_t i = 0; i < 27; ++i) {
    CHECK(p.cad.top()[i].index == r.cad.top()[i].index);
    CHECK(p.nodes[3][i] == r.nodes[3][i]);
  }
}

TEST_CASE("separation holds on the parabola tree") {
  auto t = parabola();
  auto rep = validate_separation(t, 3, 7);
  CHECK(rep.ok);
  CHECK(rep.search_failures.empty());
  CHECK(rep.nodes_checked == 7);
  CHECK(rep.probes >= rep.nodes_checked);

  // The a != 0 branch at a = -1, b = 0, c = 1: -x^2 + 1 has a nonzero
  // discriminant, so it is square-free there.
  auto o = t.order;
  Polynomial p = parse_polynomial("a*x^2 + b*x + c", o).substitute_prefix({-1, 0, 1});
  CHECK_FALSE(oracle::sylvester_resultant(p, p.derivative(3), 3).is_zero());
}

TEST_CASE("separation failures are reported") {
  // Coprime as polynomials, but equal once a = 0.
  auto t = parse_tree(
      "(ccd (order a x) (root (node (eq a) (node (eq x - 1)) (node (eq x - 1 + a)) (node (neq))) (node (neq))))");
  auto rep = validate_separation(t);
  CHECK_FALSE(rep.ok);
  REQUIRE_FALSE(rep.violations.empty());
  CHECK(rep.violations[0].find("share a root") != std::string::npos);
  CHECK_THROWS_AS(make_semialgebraic(t), SeparationError);

  // Leading coefficient vanishes on the branch.
  auto lc = parse_tree("(ccd (order a x) (root (node (eq a) (node (eq a*x + 1)) (node (neq))) (node (neq))))");
  auto lrep = validate_separation(lc);
  CHECK_FALSE(lrep.ok);
  try {
    make_semialgebraic(lc);
    FAIL("expected a separation error");
  } catch (const SeparationError& e) {
    CHECK(e.path() == "a = 0");
  }

  // Siblings p and p*q built in code, bypassing the structural checks.
  auto o = parse_order("x");
  CCDTree bad;
  bad.order = o;
  bad.root.children.resize(3);
  bad.root.children[0].kind = CCDNode::Kind::Equation;
  bad.root.children[0].poly = parse_polynomial("x - 1", o);
  bad.root.children[1].kind = CCDNode::Kind::Equation;
  bad.root.children[1].poly = parse_polynomial("(x - 1)*(x + 1)", o);
  bad.root.children[2].kind = CCDNode::Kind::Complement;
  for (auto& c : bad.root.children) c.level = 1;
  CHECK_THROWS_AS(check_tree(bad), InvalidArgument);
  auto brep = validate_separation(bad);
  CHECK_FALSE(brep.ok);
}
