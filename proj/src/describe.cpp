#include "cadkit/cad.hpp"

namespace cadkit {

namespace {

Rel sign_rel(Sign s) { return s == Sign::Positive ? Rel::GT : s == Sign::Negative ? Rel::LT : Rel::EQ; }

}  // namespace

FormulaPtr root_constraint(const CAD& cad, const Cell& cell, size_t var, const RootRef& ref, Rel rel) {
  const Polynomial& p = cad.bound_polys.at(ref.poly);
  if (p.degree(var) == 1) {
    PointContext ctx(cell.sample);
    Sign lc = ctx.sign(p.leading_coefficient(var), var);
    return make_atom(p, lc == Sign::Negative ? flip(rel) : rel);
  }
  return make_root_atom(var, rel, ref.index, p);
}

FormulaPtr describe_cell(const CAD& cad, const Cell& cell, DescribeMode mode) {
  std::vector<FormulaPtr> parts;
  size_t last = cell.bounds.size();
  for (size_t i = 0; i < last; ++i) {
    const Bound& b = cell.bounds[i];
    switch (b.kind) {
      case Bound::Kind::Whole: break;
      case Bound::Kind::Below: parts.push_back(root_constraint(cad, cell, i, *b.upper, Rel::LT)); break;
      case Bound::Kind::Above: parts.push_back(root_constraint(cad, cell, i, *b.lower, Rel::GT)); break;
      case Bound::Kind::Between:
        parts.push_back(root_constraint(cad, cell, i, *b.lower, Rel::GT));
        parts.push_back(root_constraint(cad, cell, i, *b.upper, Rel::LT));
        break;
      case Bound::Kind::Section: {
        const Polynomial& p = cad.bound_polys.at(b.lower->poly);
        int d = p.degree(i);
        if (mode == DescribeMode::Thom && i + 1 == last && d >= 2) {
          PointContext ctx(cell.sample);
          parts.push_back(make_atom(p, Rel::EQ));
          Polynomial q = p;
          for (int k = 1; k < d; ++k) {
            q = q.derivative(i);
            parts.push_back(make_atom(q, sign_rel(ctx.sign(q))));
          }
        } else {
          parts.push_back(root_constraint(cad, cell, i, *b.lower, Rel::EQ));
        }
        break;
      }
    }
  }
  return make_and(std::move(parts));
}

}  // namespace cadkit
