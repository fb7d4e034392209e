#include "cadkit/meta.hpp"

#include <cmath>
#include <regex>
#include <string>

#include "cadkit/error.hpp"

namespace cadkit {

namespace {

constexpr double kMaxBits = 67108864.0;  // 2^26

struct Factor {
  unsigned long base;
  double exponent;  // may exceed the integer range, checked before use
};

Integer evaluate(const std::vector<Factor>& fs) {
  double bits = 0;
  for (const auto& f : fs)
    if (f.base > 1) bits += f.exponent * std::log2(static_cast<double>(f.base));
  if (bits > kMaxBits) throw InvalidArgument("bound value too large to evaluate exactly");
  Integer out = 1;
  for (const auto& f : fs) {
    if (f.base == 1 || f.exponent == 0) continue;
    Integer t;
    mpz_ui_pow_ui(t.get_mpz_t(), f.base, static_cast<unsigned long>(f.exponent));
    out *= t;
  }
  return out;
}

double pow2(unsigned long e) { return std::ldexp(1.0, static_cast<int>(std::min<unsigned long>(e, 2000))); }

}  // namespace

const char* bound_name(BoundKind k) {
  switch (k) {
    case BoundKind::CollinsTime: return "collins-time";
    case BoundKind::CollinsCells: return "collins-cells";
    case BoundKind::McCallumCells: return "mccallum-cells";
    case BoundKind::McCallumCellsRefined: return "mccallum-cells-refined";
    case BoundKind::DavenportTime: return "davenport-time";
  }
  return "";
}

const std::vector<BoundKind>& all_bound_kinds() {
  static const std::vector<BoundKind> all{BoundKind::CollinsTime, BoundKind::CollinsCells, BoundKind::McCallumCells,
                                          BoundKind::McCallumCellsRefined, BoundKind::DavenportTime};
  return all;
}

BoundKind parse_bound_kind(std::string_view s) {
  for (auto k : all_bound_kinds())
    if (s == bound_name(k)) return k;
  throw InvalidArgument("unknown bound '" + std::string(s) +
                        "' (expected collins-time, collins-cells, mccallum-cells, mccallum-cells-refined or "
                        "davenport-time)");
}

Integer bound(const BoundParams& p, BoundKind which) {
  if (p.m == 0 || p.d == 0 || p.l == 0 || p.n == 0) throw InvalidArgument("bound parameters must be positive");
  unsigned long m = p.m, d2 = 2 * p.d, l = p.l, n = p.n;
  switch (which) {
    case BoundKind::CollinsTime: return evaluate({{m, pow2(n + 6)}, {d2, pow2(2 * n + 8)}, {l, 3}});
    case BoundKind::CollinsCells: return evaluate({{m, pow2(n)}, {d2, 2 * std::pow(3.0, static_cast<double>(n))}});
    case BoundKind::McCallumCells: return evaluate({{m, pow2(n)}, {d2, static_cast<double>(n) * pow2(n)}});
    case BoundKind::McCallumCellsRefined:
      return evaluate({{2, pow2(n - 1)}, {m, 1}, {m + 1, pow2(n) - 2}, {p.d, pow2(n) - 1}});
    case BoundKind::DavenportTime: return evaluate({{m, pow2(n + 4)}, {d2, pow2(2 * n + 6)}, {l, 3}});
  }
  throw InvalidArgument("unknown bound");
}

ParsedFormula generate_dh(int m, std::string_view base) {
  if (m < 1) throw InvalidArgument("generate_dh needs m >= 1");
  std::string text(base);
  std::smatch lhs;
  static const std::regex head(R"(^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=[^=])");
  if (!std::regex_search(text, lhs, head)) throw InvalidArgument("base must read 'y = F(x)'");
  auto parsed = parse_formula(text);
  const Formula& atom = *parsed.formula;
  if (atom.kind != Formula::Kind::Atom || atom.rel != Rel::EQ || parsed.order->size() != 2)
    throw InvalidArgument("base must be one equation between two variables");
  size_t yi = *parsed.order->index_of(lhs[1].str()), xi = 1 - yi;
  const Polynomial& g = *atom.poly;
  if (g.degree(yi) != 1 || !g.leading_coefficient(yi).is_constant() || !g.depends_on(xi))
    throw InvalidArgument("base must define " + lhs[1].str() + " as a polynomial in the other variable");

  // xm, ym, zm, x(m-1), y(m-1), z(m-1), ..., x1, y1
  std::vector<std::string> names{"x" + std::to_string(m), "y" + std::to_string(m)};
  for (int k = m; k >= 2; --k) {
    names.push_back("z" + std::to_string(k));
    names.push_back("x" + std::to_string(k - 1));
    names.push_back("y" + std::to_string(k - 1));
  }
  OrderPtr order = make_order(names);
  auto var = [&](char c, int k) { return *order->index_of(std::string(1, c) + std::to_string(k)); };
  auto v = [&](char c, int k) { return Polynomial::variable(order, var(c, k)); };

  std::vector<Polynomial::Term> terms;
  for (const auto& t : g.terms()) {
    Exponents e(order->size(), 0);
    e[var('x', 1)] = t.exps[xi];
    e[var('y', 1)] = t.exps[yi];
    terms.push_back({std::move(e), t.coef});
  }
  FormulaPtr f = make_atom(Polynomial::from_terms(order, std::move(terms)), Rel::EQ);
  for (int k = 2; k <= m; ++k) {
    auto eq = [](const Polynomial& a, const Polynomial& b) { return make_atom(a - b, Rel::EQ); };
    auto guard = make_or({make_and({eq(v('y', k - 1), v('y', k)), eq(v('x', k - 1), v('z', k))}),
                          make_and({eq(v('y', k - 1), v('z', k)), eq(v('x', k - 1), v('x', k))})});
    f = make_implies(guard, f);
  }
  for (int k = 2; k <= m; ++k) {
    f = make_quantifier(Quantifier::Forall, var('y', k - 1), f);
    f = make_quantifier(Quantifier::Forall, var('x', k - 1), f);
    f = make_quantifier(Quantifier::Exists, var('z', k), f);
  }
  return {order, f};
}

}  // namespace cadkit
