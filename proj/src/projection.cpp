#include "cadkit/projection.hpp"

#include <algorithm>
#include <set>

#include "cadkit/polyarith.hpp"

namespace cadkit {

const char* operator_name(ProjectionOperator op) {
  switch (op) {
    case ProjectionOperator::Collins:
      return "collins";
    case ProjectionOperator::McCallum:
      return "mccallum";
    case ProjectionOperator::EC:
      return "ec";
    case ProjectionOperator::TTI:
      return "tti";
  }
  return "?";
}

ProjectionOperator parse_operator(std::string_view name) {
  if (name == "collins") return ProjectionOperator::Collins;
  if (name == "mccallum") return ProjectionOperator::McCallum;
  if (name == "ec") return ProjectionOperator::EC;
  if (name == "tti") return ProjectionOperator::TTI;
  throw InvalidArgument("unknown projection operator '" + std::string(name) + "'");
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Input:
      return "input";
    case Provenance::Coefficient:
      return "coefficient";
    case Provenance::Discriminant:
      return "discriminant";
    case Provenance::Resultant:
      return "resultant";
    case Provenance::Content:
      return "content";
  }
  return "?";
}

ProjectionCounts count_factors(const RawProjection& raw) {
  ProjectionCounts c;
  for (const auto& f : raw) {
    if (f.kind == Provenance::Coefficient) ++c.coefficients;
    if (f.kind == Provenance::Discriminant) ++c.discriminants;
    if (f.kind == Provenance::Resultant) ++c.resultants;
  }
  return c;
}

namespace {

void add(RawProjection& out, Polynomial p, Provenance kind, std::vector<Polynomial> parents) {
  if (p.is_constant()) return;
  out.push_back({std::move(p), kind, std::move(parents)});
}

void add_coefficients(RawProjection& out, const Polynomial& p, size_t var) {
  auto cs = p.coefficients(var);
  for (size_t i = cs.size(); i-- > 0;) {
    if (cs[i].is_zero()) continue;
    if (cs[i].is_constant()) break;
    add(out, cs[i], Provenance::Coefficient, {p});
  }
}

void add_discriminant(RawProjection& out, const Polynomial& p, size_t var) {
  if (p.degree(var) >= 2) add(out, discriminant(p, var), Provenance::Discriminant, {p});
}

void add_resultant(RawProjection& out, const Polynomial& p, const Polynomial& q, size_t var) {
  add(out, resultant(p, q, var), Provenance::Resultant, {p, q});
}

std::vector<Polynomial> positive_degree(const std::vector<Polynomial>& ps, size_t var) {
  std::vector<Polynomial> out;
  for (const auto& p : ps)
    if (p.degree(var) > 0) out.push_back(p);
  return out;
}

struct SetClause {
  bool has_equation = false;
  std::vector<Polynomial> equation;  // factors of the constraint
  std::vector<Polynomial> others;
};

// Resultants of each pair are generated once even when several clauses ask
// for them.
struct PairSet {
  std::set<std::pair<std::string, std::string>> seen;
  bool insert(const Polynomial& a, const Polynomial& b) {
    std::string x = a.to_string(), y = b.to_string();
    if (x == y) return false;
    if (y < x) std::swap(x, y);
    return seen.insert({x, y}).second;
  }
};

RawProjection tti_sets(const std::vector<SetClause>& clauses, size_t var) {
  RawProjection out;
  PairSet pairs;
  std::set<std::string> own;  // polynomials whose coefficients/discriminant were added
  auto own_part = [&](const Polynomial& p) {
    if (!own.insert(p.to_string()).second) return;
    add_coefficients(out, p, var);
    add_discriminant(out, p, var);
  };
  auto res = [&](const Polynomial& p, const Polynomial& q) {
    if (pairs.insert(p, q)) add_resultant(out, p, q, var);
  };
  auto contribution = [](const SetClause& c) { return c.has_equation ? c.equation : c.others; };
  for (size_t i = 0; i < clauses.size(); ++i) {
    const auto& c = clauses[i];
    if (c.has_equation) {
      for (const auto& e : c.equation) own_part(e);
      for (size_t a = 0; a < c.equation.size(); ++a)
        for (size_t b = a + 1; b < c.equation.size(); ++b) res(c.equation[a], c.equation[b]);
      for (const auto& e : c.equation)
        for (const auto& g : c.others) res(e, g);
    } else {
      for (const auto& p : c.others) own_part(p);
      for (size_t a = 0; a < c.others.size(); ++a)
        for (size_t b = a + 1; b < c.others.size(); ++b) res(c.others[a], c.others[b]);
    }
  }
  for (size_t i = 0; i < clauses.size(); ++i) {
    for (size_t j = i + 1; j < clauses.size(); ++j) {
      const auto& ci = clauses[i];
      const auto& cj = clauses[j];
      if (ci.has_equation && cj.has_equation) {
        for (const auto& e : ci.equation)
          for (const auto& f : cj.equation) res(e, f);
      } else {
        for (const auto& p : contribution(ci))
          for (const auto& q : contribution(cj)) res(p, q);
      }
    }
  }
  return out;
}

SetClause from_clause(const Clause& c, size_t var) {
  SetClause s;
  if (c.equation && c.equation->degree(var) > 0) {
    s.has_equation = true;
    s.equation = {*c.equation};
    s.others = positive_degree(c.others, var);
  } else {
    s.others = positive_degree(c.others, var);
    if (c.equation && c.equation->degree(var) > 0) s.others.push_back(*c.equation);
  }
  return s;
}

std::vector<Polynomial> reducta(const Polynomial& p, size_t var) {
  std::vector<Polynomial> out;
  auto cs = p.coefficients(var);
  while (!cs.empty()) {
    while (!cs.empty() && cs.back().is_zero()) cs.pop_back();
    if (cs.empty()) break;
    out.push_back(Polynomial::from_coefficients(cs, var));
    cs.pop_back();
  }
  return out;
}

}  // namespace

RawProjection mccallum_raw(const std::vector<Polynomial>& polys, size_t var) {
  RawProjection out;
  for (const auto& p : polys) {
    add_coefficients(out, p, var);
    add_discriminant(out, p, var);
  }
  for (size_t i = 0; i < polys.size(); ++i)
    for (size_t j = i + 1; j < polys.size(); ++j) add_resultant(out, polys[i], polys[j], var);
  return out;
}

RawProjection collins_raw(const std::vector<Polynomial>& polys, size_t var) {
  RawProjection out;
  std::vector<std::vector<Polynomial>> reds;
  for (const auto& p : polys) {
    reds.push_back(reducta(p, var));
    for (const auto& r : reds.back()) {
      add(out, r.leading_coefficient(var), Provenance::Coefficient, {p});
      int d = r.degree(var);
      if (d < 2) continue;
      Polynomial dr = r.derivative(var);
      for (int j = 0; j < d - 1; ++j)
        add(out, principal_subresultant_coefficient(r, dr, var, j), Provenance::Discriminant, {p});
    }
  }
  for (size_t a = 0; a < polys.size(); ++a) {
    for (size_t b = a + 1; b < polys.size(); ++b) {
      for (const auto& r1 : reds[a]) {
        for (const auto& r2 : reds[b]) {
          int m = std::min(r1.degree(var), r2.degree(var));
          for (int j = 0; j < m; ++j)
            add(out, principal_subresultant_coefficient(r1, r2, var, j), Provenance::Resultant, {polys[a], polys[b]});
        }
      }
    }
  }
  return out;
}

RawProjection ec_raw(const std::vector<Polynomial>& equation, const std::vector<Polynomial>& others, size_t var) {
  SetClause c{true, positive_degree(equation, var), positive_degree(others, var)};
  if (c.equation.empty()) throw InvalidArgument("equational constraint does not involve the projected variable");
  return tti_sets({c}, var);
}

RawProjection tti_raw(const std::vector<Clause>& clauses, size_t var) {
  std::vector<SetClause> cs;
  for (const auto& c : clauses) cs.push_back(from_clause(c, var));
  return tti_sets(cs, var);
}

RawProjection product_ec_raw(const std::vector<Clause>& clauses, size_t var) {
  SetClause c;
  c.has_equation = true;
  for (const auto& cl : clauses) {
    auto s = from_clause(cl, var);
    if (!s.has_equation) throw InvalidArgument("every clause needs an equational constraint for the product route");
    for (auto& e : s.equation) c.equation.push_back(e);
    for (auto& g : s.others) c.others.push_back(g);
  }
  return tti_sets({c}, var);
}

std::vector<Polynomial> basis_of(const std::vector<Polynomial>& polys) {
  if (polys.empty()) return {};
  size_t n = polys.front().num_vars();
  std::vector<std::vector<Polynomial>> pending(n);
  for (const auto& p : polys)
    if (!p.is_constant()) pending[p.main_var()].push_back(p);
  std::vector<Polynomial> out;
  for (size_t k = n; k-- > 0;) {
    std::vector<Polynomial> prim;
    for (const auto& p : pending[k]) {
      Polynomial c = content(p, k);
      if (!c.is_constant()) pending[c.main_var()].push_back(c);
      prim.push_back(p);
    }
    for (auto& b : squarefree_basis(prim, k)) out.push_back(std::move(b));
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::vector<Polynomial> basis_of(const RawProjection& raw) {
  std::vector<Polynomial> ps;
  for (const auto& f : raw) ps.push_back(f.poly);
  return basis_of(ps);
}

std::vector<Polynomial> mccallum_step(const std::vector<Polynomial>& polys, size_t var) {
  return basis_of(mccallum_raw(positive_degree(polys, var), var));
}

std::vector<Polynomial> collins_step(const std::vector<Polynomial>& polys, size_t var) {
  return basis_of(collins_raw(positive_degree(polys, var), var));
}

std::vector<Polynomial> ec_step(const Polynomial& equation, const std::vector<Polynomial>& others, size_t var) {
  return basis_of(ec_raw({equation}, others, var));
}

std::vector<Polynomial> tti_step(const std::vector<Clause>& clauses, size_t var) {
  return basis_of(tti_raw(clauses, var));
}

namespace {

struct Pending {
  Polynomial poly;
  Provenance kind;
  std::vector<std::string> parents;
};

bool divides(const Polynomial& b, const Polynomial& f) { return f.try_divide(b).has_value(); }

}  // namespace

ProjectionLevels project_all(const ProjectionInput& input, ProjectionOperator op, size_t steps) {
  const OrderPtr& order = input.order;
  size_t n = order->size();
  ProjectionLevels out;
  out.order = order;
  out.op = op;
  out.levels.resize(n);
  std::vector<std::vector<Pending>> pending(n);

  std::vector<Polynomial> all = input.polys;
  for (const auto& c : input.clauses) {
    if (c.equation) all.push_back(*c.equation);
    for (const auto& g : c.others) all.push_back(g);
  }
  for (const auto& p : all) {
    if (p.num_vars() != n) throw OrderError("input polynomial uses a different variable order");
    if (!p.is_constant()) pending[p.main_var()].push_back({p, Provenance::Input, {}});
  }

  bool reduced = op == ProjectionOperator::EC || op == ProjectionOperator::TTI;
  if (reduced) {
    bool any_equation = false;
    for (const auto& c : input.clauses)
      if (c.equation && c.equation->degree(n - 1) > 0) any_equation = true;
    if (!any_equation) {
      out.notes.push_back(std::string("no equational constraint in the last variable; ") + operator_name(op) +
                          " falls back to mccallum");
      reduced = false;
    } else if (op == ProjectionOperator::EC && input.clauses.size() != 1) {
      throw InvalidArgument("the ec operator needs a single conjunctive clause; use tti for disjunctions");
    }
  }

  for (size_t k = n; k-- > 0;) {
    if (steps && n - 1 - k == steps) {
      out.notes.push_back("stopped after " + std::to_string(steps) + " projection step(s)");
      break;
    }
    std::vector<Polynomial> prim;
    std::vector<const Pending*> src;
    for (size_t i = 0; i < pending[k].size(); ++i) {
      const Pending& e = pending[k][i];
      Polynomial c = content(e.poly, k);
      if (!c.is_constant()) pending[c.main_var()].push_back({c, Provenance::Content, {e.poly.to_string()}});
      prim.push_back(e.poly);
    }
    for (const auto& e : pending[k]) src.push_back(&e);
    auto basis = squarefree_basis_with_sources(prim, k);
    for (auto& b : basis) {
      ProjectedPolynomial pp{b.poly, src[b.sources.front()]->kind, {}, true};
      std::set<std::string> parents;
      for (size_t s : b.sources) {
        if (src[s]->kind == Provenance::Input) pp.kind = Provenance::Input;
        for (const auto& par : src[s]->parents) parents.insert(par);
      }
      pp.parents.assign(parents.begin(), parents.end());
      out.levels[k].push_back(std::move(pp));
    }
    if (k == 0) break;

    std::vector<Polynomial> level_polys;
    for (const auto& pp : out.levels[k]) level_polys.push_back(pp.poly);
    RawProjection raw;
    if (reduced && k == n - 1) {
      std::vector<SetClause> clauses;
      std::vector<bool> split(level_polys.size(), false);
      for (const auto& c : input.clauses) {
        SetClause s;
        s.has_equation = c.equation && c.equation->degree(k) > 0;
        for (size_t i = 0; i < level_polys.size(); ++i) {
          const Polynomial& b = level_polys[i];
          bool in_eq = s.has_equation && divides(b, *c.equation);
          bool in_other = false;
          for (const auto& g : c.others)
            if (g.degree(k) > 0 && divides(b, g)) in_other = true;
          if (c.equation && !s.has_equation && c.equation->degree(k) > 0 && divides(b, *c.equation)) in_other = true;
          if (in_eq) {
            s.equation.push_back(b);
            split[i] = true;
          } else if (in_other) {
            s.others.push_back(b);
            if (!s.has_equation) split[i] = true;
          }
        }
        clauses.push_back(std::move(s));
      }
      if (op == ProjectionOperator::EC) {
        // A single constraint for the whole formula: every other polynomial
        // is paired with it.
        SetClause s = clauses.front();
        s.others.clear();
        for (size_t i = 0; i < level_polys.size(); ++i)
          if (!split[i]) s.others.push_back(level_polys[i]);
        raw = tti_sets({s}, k);
      } else {
        raw = tti_sets(clauses, k);
      }
      for (size_t i = 0; i < level_polys.size(); ++i) out.levels[k][i].splitting = split[i];
    } else if (op == ProjectionOperator::Collins) {
      raw = collins_raw(level_polys, k);
    } else {
      raw = mccallum_raw(level_polys, k);
    }
    if (k == n - 1) out.top_counts = count_factors(raw);
    for (auto& f : raw) {
      std::vector<std::string> parents;
      for (const auto& par : f.parents) parents.push_back(par.to_string());
      pending[f.poly.main_var()].push_back({std::move(f.poly), f.kind, std::move(parents)});
    }
  }
  return out;
}

}  // namespace cadkit
