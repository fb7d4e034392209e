#include <doctest.h>

#include "cadkit/polynomial.hpp"

using namespace cadkit;

TEST_CASE("parse and print round trip") {
  auto o = parse_order("a,b,c,x");
  auto p = parse_polynomial("a*x^2 + b*x + c", o);
  CHECK(p.to_string() == "a*x^2 + b*x + c");
  CHECK(parse_polynomial(p.to_string(), o) == p);
  auto d = parse_polynomial("b^2 - 4*a*c", o);
  CHECK(parse_polynomial(d.to_string(), o) == d);
  CHECK(parse_polynomial("(x+1)^2 - x^2 - 2*x", o).to_string() == "1");
  CHECK(parse_polynomial("x/2 - 3/4", o).to_string() == "1/2*x - 3/4");
  CHECK(parse_polynomial("-x^2", o).to_string() == "-x^2");
  CHECK(parse_polynomial("0", o).is_zero());
}

TEST_CASE("parse errors") {
  auto o = parse_order("x,y");
  CHECK_THROWS_AS(parse_polynomial("x + z", o), OrderError);
  CHECK_THROWS_AS(parse_polynomial("x +", o), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x / y", o), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x ) ", o), ParseError);
  CHECK_THROWS_AS(parse_order("x,x"), OrderError);
}

TEST_CASE("structure queries") {
  auto o = parse_order("x,y");
  auto p = parse_polynomial("x^2*y^3 + 2*x*y - 5", o);
  CHECK(p.degree(0) == 2);
  CHECK(p.degree(1) == 3);
  CHECK(p.total_degree() == 5);
  CHECK(p.level() == 2);
  CHECK(p.main_var() == 1);
  auto cs = p.coefficients(1);
  REQUIRE(cs.size() == 4);
  CHECK(cs[3].to_string() == "x^2");
  CHECK(cs[1].to_string() == "2*x");
  CHECK(cs[0].to_string() == "-5");
  CHECK(Polynomial::from_coefficients(cs, 1) == p);
  CHECK(p.leading_coefficient(0).to_string() == "y^3");
  CHECK(p.derivative(1).to_string() == "3*x^2*y^2 + 2*x");
  CHECK(p.substitute(0, Rational(2)).to_string() == "4*y^3 + 4*y - 5");
  CHECK(p.evaluate({Rational(1), Rational(1)}) == -2);
  CHECK(parse_polynomial("7", o).level() == 0);
}

TEST_CASE("division and normalization") {
  auto o = parse_order("x,y");
  auto a = parse_polynomial("x^2 - y^2", o), b = parse_polynomial("x + y", o);
  CHECK(a.divide_exact(b).to_string() == "x - y");
  CHECK_FALSE(a.try_divide(parse_polynomial("x + 2*y", o)).has_value());
  CHECK_THROWS_AS(a.divide_exact(parse_polynomial("x + 2*y", o)), InvalidArgument);
  CHECK(parse_polynomial("-2/3*y + 4/9", o).normalized().to_string() == "3*y - 2");
  CHECK(parse_polynomial("b - a^2", parse_order("a,b")).normalized().to_string() == "a^2 - b");
}

TEST_CASE("reorder") {
  auto o1 = parse_order("x,y"), o2 = parse_order("y,x,z");
  auto p = parse_polynomial("x*y^2 + x", o1);
  auto q = p.reorder(o2);
  CHECK(q.to_string() == "y^2*x + x");
  CHECK(q.reorder(o1) == p);
}
