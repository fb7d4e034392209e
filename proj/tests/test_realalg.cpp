#include <doctest.h>

#include <random>

#include "cadkit/polyarith.hpp"
#include "cadkit/realalg.hpp"
#include "oracles.hpp"

using namespace cadkit;

namespace {

bool contains(const RealAlgebraicNumber& r, const Rational& lo, const Rational& hi) {
  return lo <= r.interval().lo && r.interval().hi <= hi;
}

}  // namespace

TEST_CASE("isolate roots of x^2 - 2") {
  auto o = parse_order("x");
  auto rs = isolate_roots(parse_polynomial("x^2 - 2", o));
  REQUIRE(rs.size() == 2);
  CHECK(contains(rs[0], Rational(-2), Rational(-1)));
  CHECK(contains(rs[1], Rational(1), Rational(2)));
  CHECK(sign_at(parse_polynomial("x^2 - 2", o), rs[1]) == Sign::Zero);
  CHECK(sign_at(parse_polynomial("x - 1", o), rs[1]) == Sign::Positive);
  CHECK(sign_at(parse_polynomial("x^3 - 2*x", o), rs[0]) == Sign::Zero);
  CHECK(compare(rs[0], rs[1]) < 0);
  CHECK(compare(rs[1], rs[1]) == 0);
}

TEST_CASE("rational roots are exact") {
  auto o = parse_order("t");
  auto rs = isolate_roots(parse_polynomial("t^3 - t", o));
  REQUIRE(rs.size() == 3);
  CHECK(rs[0].is_exact());
  CHECK(rs[0].exact_value() == -1);
  CHECK(rs[1].exact_value() == 0);
  CHECK(rs[2].exact_value() == 1);
  auto r = isolate_roots(parse_polynomial("6*t^2 - 5*t - 6", o));  // roots -2/3, 3/2
  REQUIRE(r.size() == 2);
  CHECK(r[0].exact_value() == Rational(-2, 3));
  CHECK(r[1].exact_value() == Rational(3, 2));
  CHECK_THROWS_AS(isolate_roots(parse_polynomial("t^2", o)), InvalidArgument);
  CHECK_THROWS_AS(isolate_roots(parse_polynomial("4", o)), InvalidArgument);
}

TEST_CASE("roots in a later variable of the order") {
  auto o = parse_order("a,x");
  auto rs = isolate_roots(parse_polynomial("x^2 - 3", o));
  REQUIRE(rs.size() == 2);
  CHECK(rs[0].var() == 1);
  CHECK(rs[0].defining().to_string() == "x^2 - 3");
}

TEST_CASE("refinement and Thom encodings") {
  auto o = parse_order("x");
  auto p = parse_polynomial("x^2 - 2", o);
  auto rs = isolate_roots(p);
  auto f = refine(rs[1], Rational(1, 1000));
  CHECK(f.interval().hi - f.interval().lo < Rational(1, 1000));
  CHECK(f.interval().lo * f.interval().lo < 2);
  CHECK(f.interval().hi * f.interval().hi > 2);
  CHECK(thom_encoding(p, rs[1]) == std::vector<Sign>{Sign::Positive, Sign::Positive});
  CHECK(thom_encoding(p, rs[0]) == std::vector<Sign>{Sign::Negative, Sign::Positive});
}

TEST_CASE("choose_sample examples") {
  auto o = parse_order("x");
  auto r2 = isolate_roots(parse_polynomial("x^2 - 2", o));
  auto r3 = isolate_roots(parse_polynomial("x^2 - 3", o));
  CHECK(choose_sample(r2[1], r3[1]) == Rational(3, 2));
  CHECK(choose_sample(std::nullopt, std::nullopt) == 0);
  CHECK(choose_sample(std::nullopt, r2[0]) == -2);
  CHECK(choose_sample(r2[1], std::nullopt) == 2);
  CHECK(choose_sample(r2[0], r2[1]) == 0);
  auto one = RealAlgebraicNumber::exact(1, o, 0), two = RealAlgebraicNumber::exact(2, o, 0);
  CHECK(choose_sample(one, two) == Rational(3, 2));
  CHECK(choose_sample(RealAlgebraicNumber::exact(-1, o, 0), one) == 0);
  CHECK(choose_sample(RealAlgebraicNumber::exact(Rational(1, 3), o, 0), RealAlgebraicNumber::exact(Rational(1, 2), o, 0)) ==
        Rational(3, 8));
  CHECK_THROWS_AS(choose_sample(two, one), InvalidArgument);
}

TEST_CASE("choose_sample matches dyadic enumeration") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-40, 40), den(1, 12);
  auto o = parse_order("x");
  for (int i = 0; i < 200; ++i) {
    Rational a = make_rational(num(rng), den(rng)), b = make_rational(num(rng), den(rng));
    if (a == b) continue;
    if (b < a) std::swap(a, b);
    Rational got = choose_sample(RealAlgebraicNumber::exact(a, o, 0), RealAlgebraicNumber::exact(b, o, 0));
    // Oracle: scan denominators 1, 2, 4, ... and numerators by |N| then sign.
    Rational want;
    bool found = false;
    for (long s = 1; !found; s *= 2) {
      for (long m = 0; m <= 200 * s && !found; ++m) {
        for (long n : {m, -m}) {
          Rational c = make_rational(n, s);
          if (a < c && c < b) {
            want = c;
            found = true;
            break;
          }
        }
      }
    }
    CHECK(got == want);
  }
}

TEST_CASE("isolation agrees with Sturm counts") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> degd(1, 8);
  auto o = parse_order("x");
  int tested = 0;
  while (tested < 500) {
    auto p = oracle::random_univariate(rng, o, degd(rng), 20);
    p = squarefree_part(p, 0);
    if (p.degree(0) < 1) continue;
    auto rs = isolate_roots(p);
    CHECK(static_cast<int>(rs.size()) == oracle::sturm_total(p));
    for (const auto& r : rs) {
      if (r.is_exact()) {
        CHECK(p.substitute(0, r.exact_value()).is_zero());
      } else {
        CHECK(oracle::sturm_count(p, r.interval().lo, r.interval().hi) == 1);
      }
    }
    for (size_t i = 1; i < rs.size(); ++i) CHECK(compare(rs[i - 1], rs[i]) < 0);
    ++tested;
  }
}

TEST_CASE("signs and roots over an algebraic point") {
  auto o = parse_order("x,y");
  auto sx = isolate_roots(parse_polynomial("x^2 - 2", o));
  SamplePoint s;
  s.coords.push_back(sx[1]);  // sqrt 2
  PointContext ctx(s);
  auto rs = ctx.roots(parse_polynomial("y^2 - x", o));
  REQUIRE(rs.size() == 2);
  ctx.push(rs[1].value);
  CHECK(ctx.sign(parse_polynomial("y^4 - 2", o)) == Sign::Zero);
  CHECK(ctx.sign(parse_polynomial("y^2 - x", o)) == Sign::Zero);
  CHECK(ctx.sign(parse_polynomial("y - x", o)) == Sign::Negative);
  CHECK(ctx.sign(parse_polynomial("y^2*x - 2", o)) == Sign::Zero);
  CHECK(ctx.sign(parse_polynomial("y^3 - x*y - 1/1000000", o)) == Sign::Negative);
  ctx.pop();
  // Double root y = x over sqrt 2, plus y = -1.
  auto dr = ctx.roots(parse_polynomial("(y - x)^2*(y + 1)", o));
  REQUIRE(dr.size() == 2);
  CHECK(ctx.compare(dr[0].value, Rational(-1)) == 0);
  CHECK(dr[0].multiplicity == 1);
  CHECK(dr[1].multiplicity == 2);
  CHECK(ctx.nullified(parse_polynomial("(x^2 - 2)*y + x^2 - 2", o)));
  CHECK_FALSE(ctx.nullified(parse_polynomial("(x^2 - 2)*y + 1", o)));
  auto lin = ctx.roots(parse_polynomial("(x^2 - 2)*y^2 + x*y - 2", o));
  REQUIRE(lin.size() == 1);
  ctx.push(lin[0].value);
  CHECK(ctx.sign(parse_polynomial("x*y - 2", o)) == Sign::Zero);
  ctx.pop();
  Coordinate a = rs[0].value, b = dr[1].value;
  CHECK(ctx.compare(a, b) < 0);
  Coordinate c = rs[1].value;
  CHECK(ctx.sample_between(&a, &c) == 0);
}

TEST_CASE("sign_at over sample points and decimal output") {
  auto o = parse_order("x,y");
  auto sx = isolate_roots(parse_polynomial("x^2 - 2", o));
  SamplePoint s{{sx[1], Rational(1, 3)}};
  CHECK(sign_at(parse_polynomial("x*y - 1/2", o), s) == Sign::Negative);
  CHECK(sign_at(parse_polynomial("3*y - 1", o), s) == Sign::Zero);
  auto ap = approximate(s, 6);
  CHECK(ap[0] == "1.414214");
  CHECK(ap[1] == "0.333333");
  CHECK(decimal(Rational(-1, 8), 2) == "-0.13");
}
