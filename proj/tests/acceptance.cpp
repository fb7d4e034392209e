// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cadkit/ccd.hpp"
#include "cadkit/meta.hpp"
#include "cadkit/polyarith.hpp"
#include "cadkit/qe.hpp"
#include "cadkit/realalg.hpp"
#include "oracles.hpp"

using namespace cadkit;

namespace {

// Failures collected by one criterion.
struct Log {
  std::vector<std::string> problems;
  std::string summary;
  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ProjectionInput polys(const std::string& order, const std::vector<std::string>& texts) {
  auto o = parse_order(order);
  ProjectionInput in{o, {}, {}};
  for (const auto& t : texts) in.polys.push_back(parse_polynomial(t, o));
  return in;
}

ProjectionInput circles() {
  auto o = parse_order("x,y");
  auto g = [&](const char* s) { return parse_polynomial(s, o); };
  return {o, {}, {{g("x^2 + y^2 - 4"), {g("(x-3)^2 - (y+3)")}}, {g("(x-6)^2 + y^2 - 4"), {g("(x-3)^2 + (y-2)")}}}};
}

// Cylindricity, stack structure and 20-point sign sampling.
void audit(Log& log, const CAD& cad, const std::string& name, unsigned seed) {
  auto cyl = cylindricity_check(cad);
  log.expect(cyl.ok, name + ": cylindricity");
  auto st = structure_check(cad);
  log.expect(st.ok, name + ": stack structure");
  auto mm = oracle::sign_mismatches(cad, 20, seed);
  log.expect(mm.empty(), name + ": " + std::to_string(mm.size()) + " sign mismatches");
}

// A truth-table invariant CAD keeps each clause's value constant on cells;
// signs of non-equational polynomials may vary off the constraint sections.
void audit_clauses(Log& log, const CAD& cad, const FormulaPtr& dnf, const std::string& name, unsigned seed) {
  log.expect(cylindricity_check(cad).ok, name + ": cylindricity");
  log.expect(structure_check(cad).ok, name + ": stack structure");
  std::vector<std::vector<bool>> per_clause;
  for (const auto& clause : dnf->args) per_clause.push_back(evaluate_matrix(cad, clause));
  std::mt19937 rng(seed);
  int bad = 0;
  for (size_t i = 0; i < cad.top().size(); ++i) {
    const Cell& c = cad.top()[i];
    if (c.dimension != static_cast<int>(cad.dimension())) continue;
    for (int t = 0; t < 20; ++t) {
      auto pt = oracle::random_point_in_cell(cad, c, rng);
      for (size_t j = 0; j < per_clause.size(); ++j) bad += evaluate_at(dnf->args[j], pt) != per_clause[j][i];
    }
  }
  log.expect(bad == 0, name + ": " + std::to_string(bad) + " clause truth mismatches");
}

std::string count_text(const CAD& cad) {
  return std::to_string(cad.top().size()) + " cells, " + std::to_string(cad.full_dimensional_count()) +
         " full-dimensional";
}

void parabola_cad(Log& log) {
  auto t0 = std::chrono::steady_clock::now();
  auto cad = build_cad(polys("a,b,c,x", {"a*x^2 + b*x + c"}), {});
  double s = seconds_since(t0);
  log.expect(cad.top().size() == 115, "expected 115 cells, got " + std::to_string(cad.top().size()));
  log.expect(s < 5, "took " + std::to_string(s) + " s");
  audit(log, cad, "parabola", 1);
  log.summary = count_text(cad);
}

void parabola_projection(Log& log) {
  auto in = polys("a,b,c,x", {"a*x^2 + b*x + c"});
  auto L = project_all(in, ProjectionOperator::McCallum);
  auto o = in.order;
  // Reference set built by hand: coefficients plus the Sylvester resultant of
  // p and p' divided by a.
  auto p = in.polys[0];
  auto res = oracle::sylvester_resultant(p, p.derivative(3), 3);
  auto disc = res.try_divide(parse_polynomial("a", o));
  log.expect(disc.has_value(), "a does not divide res(p, p')");
  std::set<std::string> want{"a", "b", "c"};
  if (disc) want.insert(disc->normalized().to_string());
  std::set<std::string> lower;
  for (size_t k = 0; k < 3; ++k)
    for (const auto& pp : L.levels[k]) lower.insert(pp.poly.normalized().to_string());
  log.expect(L.levels[3].size() == 1 && L.levels[3][0].poly.normalized() == p.normalized(), "top level is not {p}");
  log.expect(lower == want, "lower levels differ from the coefficient/discriminant set");
  std::string got;
  for (const auto& s : lower) got += (got.empty() ? "" : ", ") + s;
  log.summary = "{p} then {" + got + "}";
}

void ccd_realization(Log& log) {
  std::ifstream in(std::string(CADKIT_FIXTURES) + "/parabola.ccd");
  std::stringstream ss;
  ss << in.rdbuf();
  auto t0 = std::chrono::steady_clock::now();
  auto tree = parse_tree(ss.str());
  auto r = make_semialgebraic(tree);
  double s = seconds_since(t0);
  log.expect(r.cad.top().size() == 27, "expected 27 cells, got " + std::to_string(r.cad.top().size()));
  log.expect(s < 2, "took " + std::to_string(s) + " s");
  audit(log, r.cad, "realized tree", 2);
  log.summary = std::to_string(tree.leaf_count()) + " leaves, " + std::to_string(r.cad.top().size()) + " cells";
}

void tti_example(Log& log) {
  auto in = circles();
  auto t0 = std::chrono::steady_clock::now();
  auto full = build_cad(in, {});
  double s1 = seconds_since(t0);
  CadConfig cfg;
  cfg.op = ProjectionOperator::TTI;
  cfg.lifting = LiftingMode::ECReduced;
  t0 = std::chrono::steady_clock::now();
  auto tti = build_cad(in, cfg);
  double s2 = seconds_since(t0);
  log.expect(full.top().size() == 231 && full.full_dimensional_count() == 72, "mccallum: " + count_text(full));
  log.expect(tti.top().size() == 67 && tti.full_dimensional_count() == 22, "tti: " + count_text(tti));
  log.expect(s1 < 30 && s2 < 30, "too slow");
  audit(log, full, "mccallum", 3);
  log.summary = "mccallum " + count_text(full) + "; tti " + count_text(tti);
}

void projection_counts(Log& log) {
  auto o = parse_order("a0,a1,a2,b0,b1,b2,c0,c1,c2,d0,d1,d2,x");
  auto q = [&](char c) {
    std::string s(1, c);
    return parse_polynomial(s + "2*x^2 + " + s + "1*x + " + s + "0", o);
  };
  auto g1 = q('a'), g2 = q('b'), g3 = q('c'), g4 = q('d');
  auto shape = [](const RawProjection& r) {
    auto c = count_factors(r);
    return std::to_string(c.discriminants) + "+" + std::to_string(c.resultants);
  };
  std::string ec = shape(ec_raw({g1}, {g2, g3}, 12)), full3 = shape(mccallum_raw({g1, g2, g3}, 12));
  std::vector<Clause> cl{{g1, {g2}}, {g4, {g3}}};
  std::string tti = shape(tti_raw(cl, 12)), prod = shape(product_ec_raw(cl, 12)),
              full4 = shape(mccallum_raw({g1, g2, g3, g4}, 12));
  log.expect(ec == "1+2", "ec " + ec);
  log.expect(full3 == "3+3", "unreduced " + full3);
  log.expect(tti == "2+3", "tti " + tti);
  log.expect(prod == "2+5", "implicit product " + prod);
  log.expect(full4 == "4+6", "unreduced " + full4);
  log.summary = "discriminants+resultants: ec " + ec + " vs " + full3 + "; tti " + tti + ", product " + prod +
                ", unreduced " + full4;
}

void qe_correctness(Log& log) {
  auto t0 = std::chrono::steady_clock::now();
  auto r = qe("exists y. y^2 = x");
  // Normal form: the set of disjunct texts.
  std::set<std::string> disj;
  if (r.formula->kind == Formula::Kind::Or)
    for (const auto& a : r.formula->args) disj.insert(to_string(a, r.order));
  else
    disj.insert(to_string(r.formula, r.order));
  log.expect(disj == std::set<std::string>{"x > 0", "x = 0"}, "got " + to_string(r.formula, r.order));
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-60, 60), den(1, 9);
  int agree = 0;
  for (int t = 0; t < 100; ++t) {
    Rational x = t % 5 == 0 ? Rational(num(rng) / 10) : make_rational(num(rng), den(rng));
    agree += evaluate_at(r.formula, {x}) == (x >= 0);
  }
  log.expect(agree == 100, std::to_string(100 - agree) + " sample disagreements");
  log.expect(seconds_since(t0) < 1, "sqrt example too slow");
  t0 = std::chrono::steady_clock::now();
  auto a = qe("forall x. x^2 >= 0");
  log.expect(a.truth == true, "forall x. x^2 >= 0 is not true");
  auto b = qe("exists x. x^2 + 1 < 0");
  log.expect(b.truth == false, "exists x. x^2 + 1 < 0 is not false");
  log.expect(seconds_since(t0) < 2, "sentences too slow");
  log.summary = to_string(r.formula, r.order) + "; true; false";
}

template <class F>
int curve_disagreements(const QEResult& r, F target, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-12, 12), den(1, 4);
  int bad = 0;
  for (int t = 0; t < 50; ++t) {
    Rational x = make_rational(num(rng), den(rng));
    Rational y = target(x);
    bad += !evaluate_at(r.formula, {x, y});
    bad += evaluate_at(r.formula, {x, y + make_rational(1 + (t % 3), den(rng))});
  }
  return bad;
}

void dh_generator(Log& log) {
  auto t0 = std::chrono::steady_clock::now();
  auto sq = generate_dh(2, "y1 = x1^2");
  auto text = to_string(sq.formula, sq.order);
  log.expect(text.rfind("exists z2. forall x1, y1.", 0) == 0, "prefix of " + text);
  auto shift = generate_dh(2, "y1 = x1 + 1");
  auto r1 = qe(shift.formula, shift.order);
  int b1 = curve_disagreements(r1, [](const Rational& x) -> Rational { return x + 2; }, 5);
  log.expect(b1 == 0, "shift: " + std::to_string(b1) + " disagreements with y = x + 2");
  QEConfig merged;
  merged.merge = true;
  auto r2 = qe(sq.formula, sq.order, merged);
  int b2 = curve_disagreements(r2, [](const Rational& x) -> Rational { return x * x * x * x; }, 6);
  log.expect(b2 == 0, "squaring: " + std::to_string(b2) + " disagreements with y = x^4");
  double s = seconds_since(t0);
  log.expect(s < 60, "took " + std::to_string(s) + " s");
  log.summary = "prefix ok; y = x + 2 and y = x^4 by sampling";
}

void property_suites(Log& log) {
  std::mt19937 rng(2024);
  auto o = parse_order("y,x");
  int mult = 0, mult_bad = 0;
  for (int i = 0; mult < 200 && i < 2000; ++i) {
    auto f = oracle::random_poly(rng, o, {0, 1}, 2, 3, 4);
    auto g = oracle::random_poly(rng, o, {0, 1}, 2, 3, 4);
    auto h = oracle::random_poly(rng, o, {0, 1}, 2, 3, 4);
    if (f.degree(1) < 2 || g.degree(1) < 2 || h.degree(1) < 1) continue;
    mult_bad += resultant(f * g, h, 1) != resultant(f, h, 1) * resultant(g, h, 1);
    auto rfg = resultant(f, g, 1);
    mult_bad += discriminant(f * g, 1) != discriminant(f, 1) * discriminant(g, 1) * rfg * rfg;
    ++mult;
  }
  log.expect(mult >= 200 && mult_bad == 0, std::to_string(mult_bad) + " multiplicativity failures in " +
                                               std::to_string(mult) + " cases");

  auto ox = parse_order("x");
  std::uniform_int_distribution<int> degd(1, 8);
  int iso = 0, iso_bad = 0;
  while (iso < 500) {
    auto p = squarefree_part(oracle::random_univariate(rng, ox, degd(rng), 20), 0);
    if (p.degree(0) < 1) continue;
    auto rs = isolate_roots(p);
    bool ok = static_cast<int>(rs.size()) == oracle::sturm_total(p);
    for (const auto& r : rs)
      ok = ok && (r.is_exact() ? p.substitute(0, r.exact_value()).is_zero()
                               : oracle::sturm_count(p, r.interval().lo, r.interval().hi) == 1);
    iso_bad += !ok;
    ++iso;
  }
  log.expect(iso_bad == 0, std::to_string(iso_bad) + " isolation disagreements in 500");

  int built = 0;
  auto run = [&](const ProjectionInput& in, const CadConfig& cfg, const std::string& name) {
    audit(log, build_cad(in, cfg), name, 100 + built);
    ++built;
  };
  run(polys("x,y", {"x^2 + y^2 - 1"}), {}, "unit circle");
  run(polys("x,y", {"y^2 - x^3 + x", "x*y - 1"}), {}, "curve pair");
  run(polys("x,y,z", {"x^2 + y^2 + z^2 - 1", "z - x*y"}), {}, "sphere and saddle");
  CadConfig collins;
  collins.op = ProjectionOperator::Collins;
  run(polys("a,b,c,x", {"a*x^2 + b*x + c"}), collins, "parabola collins");
  CadConfig tti;
  tti.op = ProjectionOperator::TTI;
  tti.lifting = LiftingMode::ECReduced;
  auto dnf = parse_formula(
      "(x^2 + y^2 - 4 = 0 /\\ (x-3)^2 - (y+3) > 0) \\/ ((x-3)^2 + (y-2) > 0 /\\ (x-6)^2 + y^2 - 4 = 0)",
      parse_order("x,y"));
  audit_clauses(log, build_cad({dnf.order, {}, *clauses_of(dnf.formula)}, tti), dnf.formula, "circles tti", 150);
  ++built;
  auto rng_o = parse_order("x,y");
  for (int i = 0; i < 6; ++i) {
    auto p = oracle::random_poly(rng, rng_o, {0, 1}, 3, 4, 5);
    if (p.is_constant()) continue;
    audit(log, build_cad({rng_o, {p}, {}}, {}), "random " + p.to_string(), 200 + i);
    ++built;
  }
  log.summary = std::to_string(mult) + " multiplicativity cases, 500 isolations, " + std::to_string(built) +
                " CADs audited";
}

void bound_grid(Log& log) {
  auto p2 = [](unsigned long e) { return 1UL << e; };
  auto p3 = [](unsigned long e) {
    unsigned long r = 1;
    while (e--) r *= 3;
    return r;
  };
  int checked = 0;
  for (auto k : all_bound_kinds())
    for (unsigned long m = 1; m <= 3; ++m)
      for (unsigned long d = 1; d <= 3; ++d)
        for (unsigned long n = 1; n <= 3; ++n) {
          unsigned long l = 2;
          std::vector<std::pair<unsigned long, unsigned long>> f;
          switch (k) {
            case BoundKind::CollinsTime: f = {{m, p2(n + 6)}, {2 * d, p2(2 * n + 8)}, {l, 3}}; break;
            case BoundKind::CollinsCells: f = {{m, p2(n)}, {2 * d, 2 * p3(n)}}; break;
            case BoundKind::McCallumCells: f = {{m, p2(n)}, {2 * d, n * p2(n)}}; break;
            case BoundKind::McCallumCellsRefined: f = {{2, p2(n - 1)}, {m, 1}, {m + 1, p2(n) - 2}, {d, p2(n) - 1}}; break;
            case BoundKind::DavenportTime: f = {{m, p2(n + 4)}, {2 * d, p2(2 * n + 6)}, {l, 3}}; break;
          }
          bool ok = bound({m, d, l, n}, k).get_str() == oracle::big_product(f);
          log.expect(ok, std::string(bound_name(k)) + " m=" + std::to_string(m) + " d=" + std::to_string(d) +
                             " n=" + std::to_string(n));
          ++checked;
        }
  log.summary = std::to_string(checked) + " values over 5 expressions";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Log&)> run;
  };
  std::vector<Criterion> all{
      {"parabola CAD count", parabola_cad},
      {"parabola projection closure", parabola_projection},
      {"CCD realization", ccd_realization},
      {"TTICAD worked example", tti_example},
      {"projection-set counts", projection_counts},
      {"QE correctness", qe_correctness},
      {"DH generator", dh_generator},
      {"property suites", property_suites},
      {"bound calculators", bound_grid},
  };
  int failed = 0;
  for (size_t i = 0; i < all.size(); ++i) {
    Log log;
    auto t0 = std::chrono::steady_clock::now();
    try {
      all[i].run(log);
    } catch (const std::exception& e) {
      log.problems.push_back(std::string("exception: ") + e.what());
    }
    double s = seconds_since(t0);
    bool ok = log.problems.empty();
    failed += !ok;
    std::printf("%s  %zu. %s (%.2f s): %s\n", ok ? "PASS" : "FAIL", i + 1, all[i].name, s, log.summary.c_str());
    for (const auto& p : log.problems) std::printf("        %s\n", p.c_str());
  }
  return failed == 0 ? 0 : 1;
}
