#include <doctest.h>

#include <map>
#include <random>

#include "cadkit/error.hpp"
#include "cadkit/qe.hpp"
#include "oracles.hpp"

using namespace cadkit;

namespace {

std::string text(const QEResult& r) { return to_string(r.formula, r.order); }

// Decides the instantiated sentence with a separate elimination run.
bool decide(const FormulaPtr& f, const OrderPtr& order, const std::vector<Rational>& free_values) {
  FormulaPtr g = f;
  for (size_t v = 0; v < free_values.size(); ++v) g = substitute(g, v, free_values[v]);
  auto r = qe(g, order);
  REQUIRE(r.truth.has_value());
  return *r.truth;
}

// Synthesized formula agrees with the decision procedure at random points.
void soundness(const std::string& input, int samples, unsigned seed, const QEConfig& cfg = {}) {
  auto parsed = parse_formula(input);
  auto r = qe(parsed.formula, parsed.order, cfg);
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-40, 40), den(1, 8);
  size_t k = r.prenex.free_count;
  for (int t = 0; t < samples; ++t) {
    std::vector<Rational> pt;
    for (size_t v = 0; v < k; ++v) pt.push_back(t % 4 == 0 ? Rational(num(rng) / 10) : make_rational(num(rng), den(rng)));
    bool want = decide(parsed.formula, parsed.order, pt);
    if (evaluate_at(r.formula, pt) != want) {
      std::string at;
      for (auto& q : pt) at += to_string(q) + " ";
      FAIL_CHECK(input << " disagrees at " << at << ": " << text(r));
    }
  }
}

}  // namespace

TEST_CASE("qe of sentences") {
  auto a = qe("forall x. x^2 >= 0");
  CHECK(a.truth == true);
  CHECK(text(a) == "true");
  auto b = qe("exists x. x^2 + 1 < 0");
  CHECK(b.truth == false);
  CHECK_FALSE(b.witness.has_value());
  auto c = qe("exists x. x^2 - 2 = 0");
  CHECK(c.truth == true);
  REQUIRE(c.witness.has_value());
  CHECK_FALSE(c.witness->counterexample);
  CHECK(c.witness->names == std::vector<std::string>{"x"});
  CHECK(coordinate_to_string(c.witness->values[0]).rfind("root of x^2 - 2", 0) == 0);
  auto d = qe("forall x. x^2 - 1 > 0");
  CHECK(d.truth == false);
  REQUIRE(d.witness.has_value());
  CHECK(d.witness->counterexample);
  auto e = qe("forall x. exists y. x*y = 1");
  CHECK(e.truth == false);
  auto f = qe("forall x. exists y. y^3 = x");
  CHECK(f.truth == true);
}

TEST_CASE("qe with free variables") {
  auto r = qe("exists y. y^2 = x");
  CHECK(text(r) == "x = 0 \\/ x > 0");
  QEConfig merged;
  merged.merge = true;
  CHECK(text(qe("exists y. y^2 = x", nullptr, merged)) == "x >= 0");
  CHECK(text(qe("exists y. x*y = 1")) == "x < 0 \\/ x > 0");
  auto none = qe("exists y. y^2 + x^2 + 1 = 0");
  CHECK(text(none) == "false");
}

TEST_CASE("output clause count is bounded by the true cells") {
  for (const char* s : {"exists y. y^2 = x", "exists z. z^2 = x^2 + y^2 - 1", "exists y. x*y = 1",
                        "forall y. y^2 + x*y + 1 > 0"}) {
    for (bool merge : {false, true}) {
      QEConfig cfg;
      cfg.merge = merge;
      auto r = qe(s, nullptr, cfg);
      size_t clauses = r.formula->kind == Formula::Kind::Or ? r.formula->args.size() : 1;
      CHECK(clauses <= std::max<size_t>(1, r.true_cells));
    }
  }
}

TEST_CASE("qe soundness by sampling") {
  soundness("exists y. y^2 = x", 100, 1);
  soundness("exists y. y^2 + x*y + 1 = 0", 100, 2);
  soundness("forall y. y^2 + x*y + 1 > 0", 100, 3);
  soundness("exists z. z^2 = x^2 + y^2 - 1", 100, 4);
  QEConfig merged;
  merged.merge = true;
  soundness("exists z. z^2 = x^2 + y^2 - 1", 100, 5, merged);
  soundness("exists y. y^2 + x*y + 1 = 0 /\\ y > 0", 100, 6, merged);
}

TEST_CASE("cell descriptions") {
  auto x = parse_order("x");
  ProjectionInput in{x, {parse_polynomial("x", x)}, {}};
  auto cad = build_cad(in, {});
  CHECK(to_string(describe_cell(cad, cad.top()[2]), x) == "x > 0");
  CHECK(to_string(describe_cell(cad, cad.top()[1]), x) == "x = 0");

  ProjectionInput sq{x, {parse_polynomial("x^2 - 2", x)}, {}};
  auto c2 = build_cad(sq, {});
  CHECK(to_string(describe_cell(c2, c2.top()[3]), x) == "x = RootOf_2(x^2 - 2)");
  CHECK(to_string(describe_cell(c2, c2.top()[3], DescribeMode::Thom), x) == "x^2 - 2 = 0 /\\ 2*x > 0");
  CHECK(to_string(describe_cell(c2, c2.top()[1], DescribeMode::Thom), x) == "x^2 - 2 = 0 /\\ 2*x < 0");
  CHECK(to_string(describe_cell(c2, c2.top()[2]), x) == "RootOf_1(x^2 - 2) < x < RootOf_2(x^2 - 2)");

  auto xy = parse_order("x,y");
  ProjectionInput circ{xy, {parse_polynomial("x^2 + y^2 - 1", xy)}, {}};
  auto c3 = build_cad(circ, {});
  const Cell& inside = c3.top()[6];  // (3,3)
  CHECK(index_to_string(inside.index) == "(3,3)");
  CHECK(to_string(describe_cell(c3, inside), xy) ==
        "RootOf_1(x^2 - 1) < x /\\ x < RootOf_2(x^2 - 1) /\\ RootOf_1(x^2 + y^2 - 1) < y /\\ y < RootOf_2(x^2 + y^2 - 1)");
  // Every sample satisfies its own description.
  for (const auto& lvl : c3.levels)
    for (const auto& c : lvl) {
      bool rational = true;
      std::vector<Rational> pt;
      for (const auto& v : c.sample.coords) {
        if (!is_rational(v)) rational = false;
        else pt.push_back(std::get<Rational>(v));
      }
      if (rational) CHECK(evaluate_at(describe_cell(c3, c), pt));
    }
}

TEST_CASE("propagation matches a brute-force table") {
  auto p = parse_formula("forall y. exists x. x^2 + y^2 - 1 < 0 \\/ x*y > 1", parse_order("y,x"));
  auto pf = prenex(p.formula, p.order);
  CadConfig cc;
  auto cad = build_cad({p.order, atom_polynomials(pf.matrix), {}}, cc);
  auto top = evaluate_matrix(cad, pf.matrix);
  auto truths = propagate(cad, pf, top);
  // Group top cells by their first index component only.
  std::map<int, bool> any;
  for (size_t i = 0; i < cad.top().size(); ++i) {
    int y = cad.top()[i].index[0];
    any[y] = any.count(y) ? (any[y] || top[i]) : static_cast<bool>(top[i]);
  }
  bool all = true;
  for (auto& [y, v] : any) all = all && v;
  REQUIRE(truths[1].size() == any.size());
  for (size_t i = 0; i < cad.cells(1).size(); ++i) CHECK(truths[1][i] == any[cad.cells(1)[i].index[0]]);
  CHECK(truths[0][0] == all);
  CHECK(truths[0][0] == true);

  std::vector<bool> all_true(cad.top().size(), true);
  auto t2 = propagate(cad, pf, all_true);
  CHECK(t2[0][0]);
}

TEST_CASE("matrix evaluation on the truth-table invariant CAD") {
  auto p = parse_formula("(x^2 + y^2 - 4 = 0 /\\ (x-3)^2 - (y+3) > 0) \\/ ((x-3)^2 + (y-2) > 0 /\\ (x-6)^2 + y^2 - 4 = 0)",
                         parse_order("x,y"));
  auto cl = clauses_of(p.formula);
  REQUIRE(cl.has_value());
  CadConfig cc;
  cc.op = ProjectionOperator::TTI;
  cc.lifting = LiftingMode::ECReduced;
  auto cad = build_cad({p.order, {}, *cl}, cc);
  REQUIRE(cad.top().size() == 67);
  auto truths = evaluate_matrix(cad, p.formula);
  size_t n_true = std::count(truths.begin(), truths.end(), true);
  CHECK(n_true > 0);
  // Each clause keeps its value at random points of full-dimensional cells.
  std::vector<std::vector<bool>> per_clause;
  for (const auto& clause : p.formula->args) per_clause.push_back(evaluate_matrix(cad, clause));
  std::mt19937 rng(9);
  for (size_t i = 0; i < cad.top().size(); ++i) {
    const Cell& c = cad.top()[i];
    if (c.dimension != 2) continue;
    for (int t = 0; t < 20; ++t) {
      auto pt = oracle::random_point_in_cell(cad, c, rng);
      for (size_t j = 0; j < per_clause.size(); ++j)
        CHECK(evaluate_at(p.formula->args[j], pt) == per_clause[j][i]);
    }
  }
}

TEST_CASE("reduced operators are refused with free and bound variables") {
  QEConfig cfg;
  cfg.cad.op = ProjectionOperator::TTI;
  cfg.cad.lifting = LiftingMode::ECReduced;
  CHECK_THROWS_AS(qe("exists y. y^2 = x /\\ y > 0", nullptr, cfg), InvalidArgument);
  cfg.allow_reduced_with_free = true;
  CHECK(text(qe("exists y. y^2 = x /\\ y > 0", nullptr, cfg)) == "x > 0");
  QEConfig sent;
  sent.cad.op = ProjectionOperator::EC;
  sent.cad.lifting = LiftingMode::ECReduced;
  CHECK(qe("exists x, y. x^2 + y^2 = 1 /\\ x + y > 1", nullptr, sent).truth == true);
}

TEST_CASE("prenex form is equivalent by sampling") {
  for (const char* s : {"(exists y. x*y = 1) /\\ x > 0", "~(exists y. y^2 = x) \\/ x > 4",
                        "(forall y. y^2 + x*y + 1 > 0) -> x^2 < 5"}) {
    auto p = parse_formula(s);
    auto pf = prenex(p.formula, p.order);
    for (int v = -12; v <= 12; ++v) {
      Rational x = make_rational(v, 4);
      CHECK(decide(p.formula, p.order, {x}) == decide(pf.to_formula(), p.order, {x}));
    }
  }
}

TEST_CASE("depth-first decision agrees with full elimination") {
  for (const char* s : {"forall x. x^2 >= 0", "exists x. x^2 + 1 < 0", "forall x. exists y. x*y = 1",
                        "forall x. exists y. y^3 = x", "exists x, y. x^2 + y^2 = 1 /\\ x + y > 1",
                        "forall y. exists x. x^2 + y^2 - 1 < 0 \\/ x*y > 1",
                        "exists x. forall y. y^2 - x*y + 1 > 0"}) {
    auto p = parse_formula(s);
    auto full = qe(p.formula, p.order);
    auto lazy = decide(p.formula, p.order);
    CHECK_MESSAGE(lazy.truth == *full.truth, s);
    CHECK(lazy.cells <= full.cad->top().size() * p.order->size());
  }
  CHECK_THROWS_AS(decide(parse_formula("exists y. y^2 = x").formula, parse_order("x,y")), InvalidArgument);
}
