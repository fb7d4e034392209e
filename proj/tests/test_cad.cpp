#include <doctest.h>

#include "cadkit/cad.hpp"
#include "cadkit/error.hpp"
#include "oracles.hpp"

using namespace cadkit;

namespace {

ProjectionInput single(const std::string& order, const std::vector<std::string>& polys) {
  auto o = parse_order(order);
  ProjectionInput in{o, {}, {}};
  for (const auto& p : polys) in.polys.push_back(parse_polynomial(p, o));
  return in;
}

ProjectionInput circles() {
  auto o = parse_order("x,y");
  auto g = [&](const char* s) { return parse_polynomial(s, o); };
  return {o, {}, {{g("x^2 + y^2 - 4"), {g("(x-3)^2 - (y+3)")}}, {g("(x-6)^2 + y^2 - 4"), {g("(x-3)^2 + (y-2)")}}}};
}

void monte_carlo(const CAD& cad, int per_cell, unsigned seed) {
  for (const auto& m : oracle::sign_mismatches(cad, per_cell, seed)) FAIL_CHECK(m);
}

std::string fingerprint(const CAD& cad) {
  std::string s;
  for (const auto& lvl : cad.levels)
    for (const auto& c : lvl) {
      s += index_to_string(c.index);
      for (auto g : c.signs) s += sign_symbol(g);
      for (const auto& x : c.sample.coords) s += coordinate_to_string(x) + ",";
      s += "\n";
    }
  return s;
}

}  // namespace

TEST_CASE("univariate cad") {
  auto cad = build_cad(single("x", {"x^2 - 2"}), {});
  REQUIRE(cad.top().size() == 5);
  CHECK(coordinate_to_string(cad.top()[0].sample.coords[0]) == "-2");
  CHECK(coordinate_to_string(cad.top()[2].sample.coords[0]) == "0");
  CHECK(cad.top()[1].signs[0] == Sign::Zero);
  CHECK(cad.top()[2].signs[0] == Sign::Negative);
  CHECK(cad.top()[4].signs[0] == Sign::Positive);
  CHECK(cad.full_dimensional_count() == 3);

  auto none = build_cad(single("x", {"x^2 + 1"}), {});
  CHECK(none.top().size() == 1);
  CHECK(none.top()[0].bounds[0].kind == Bound::Kind::Whole);
}

TEST_CASE("unit circle cad") {
  auto cad = build_cad(single("x,y", {"x^2 + y^2 - 1"}), {});
  CHECK(cad.cells(1).size() == 5);
  // Stacks over x < -1, x = -1, -1 < x < 1, x = 1, x > 1.
  CHECK(cad.top().size() == 1 + 3 + 5 + 3 + 1);
  CHECK(cylindricity_check(cad).ok);
  CHECK(structure_check(cad).ok);
  monte_carlo(cad, 3, 1);
}

TEST_CASE("parabola cad has 115 cells") {
  auto cad = build_cad(single("a,b,c,x", {"a*x^2 + b*x + c"}), {});
  CHECK(cad.top().size() == 115);
  CHECK(cad.kind == InvarianceKind::SignInvariant);
  auto cyl = cylindricity_check(cad);
  CHECK(cyl.ok);
  CHECK(structure_check(cad).ok);
  monte_carlo(cad, 2, 7);
  // a = b = c = 0 nullifies the input over a point: tolerated, not fatal.
  bool tolerated = false;
  for (const auto& c : cad.top()) tolerated |= c.tolerated_nullification;
  CHECK(tolerated);
}

TEST_CASE("circle example: sign-invariant and truth-table invariant counts") {
  CadConfig full;
  auto m = build_cad(circles(), full);
  CHECK(m.top().size() == 231);
  CHECK(m.full_dimensional_count() == 72);
  CHECK(cylindricity_check(m).ok);
  monte_carlo(m, 1, 3);

  CadConfig tti;
  tti.op = ProjectionOperator::TTI;
  tti.lifting = LiftingMode::ECReduced;
  auto t = build_cad(circles(), tti);
  CHECK(t.top().size() == 67);
  CHECK(t.full_dimensional_count() == 22);
  CHECK(t.kind == InvarianceKind::TruthTableInvariant);
  CHECK(cylindricity_check(t).ok);
  CHECK(structure_check(t).ok);
}

TEST_CASE("cylindricity check catches a corrupted description") {
  auto cad = build_cad(single("x,y", {"x^2 + y^2 - 1"}), {});
  REQUIRE(cylindricity_check(cad).ok);
  auto bad = cad;
  // Cell (3,3) claims to be the section of (3,2).
  bad.levels[1][6].bounds[1] = bad.levels[1][5].bounds[1];
  CHECK_FALSE(cylindricity_check(bad).ok);
  auto bad2 = cad;
  bad2.levels[1][6].bounds[0] = bad2.levels[1][0].bounds[0];
  CHECK_FALSE(cylindricity_check(bad2).ok);
  auto bad3 = cad;
  bad3.levels[1].erase(bad3.levels[1].begin() + 5);
  CHECK_FALSE(structure_check(bad3).ok);
}

TEST_CASE("nullification over a positive-dimensional cell") {
  auto in = single("x,y,z,w", {"x*w + y"});
  CHECK_THROWS_AS(build_cad(in, {}), NotWellOriented);
  try {
    build_cad(in, {});
  } catch (const NotWellOriented& e) {
    CHECK(e.polynomial() == "x*w + y");
    CHECK(e.cell_index().size() == 3);
  }
  CadConfig restart;
  restart.fallback = Fallback::RestartWithCollins;
  auto cad = build_cad(in, restart);
  CHECK(cad.op == ProjectionOperator::Collins);
  REQUIRE_FALSE(cad.notes.empty());
  CHECK(cad.notes.front().find("restarted with collins") != std::string::npos);
  CHECK(cylindricity_check(cad).ok);
  monte_carlo(cad, 1, 5);
}

TEST_CASE("parallel lifting is deterministic") {
  CadConfig one, four;
  four.jobs = 4;
  auto a = build_cad(circles(), one);
  auto b = build_cad(circles(), four);
  CHECK(fingerprint(a) == fingerprint(b));
}

TEST_CASE("tracked signs of scalar multiples") {
  auto in = single("x", {"x - 1"});
  auto cad = build_cad(in, {});
  auto o = in.order;
  const Cell& low = cad.top()[0];
  CHECK(cad.tracked_sign(low, parse_polynomial("2 - 2*x", o)) == Sign::Positive);
  CHECK(cad.tracked_sign(low, parse_polynomial("x - 1", o)) == Sign::Negative);
  CHECK_FALSE(cad.tracked_sign(low, parse_polynomial("x", o)).has_value());
}
