#include "cadkit/formula.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <regex>
#include <set>

#include "cadkit/error.hpp"
#include "cadkit/polyarith.hpp"
#include "cadkit/realalg.hpp"
#include "lexer.hpp"

namespace cadkit {

using detail::Expr;
using detail::Tok;
using detail::TokenStream;

const char* rel_symbol(Rel r) {
  switch (r) {
    case Rel::EQ: return "=";
    case Rel::NE: return "!=";
    case Rel::LT: return "<";
    case Rel::LE: return "<=";
    case Rel::GT: return ">";
    case Rel::GE: return ">=";
  }
  return "?";
}

Rel flip(Rel r) {
  switch (r) {
    case Rel::LT: return Rel::GT;
    case Rel::LE: return Rel::GE;
    case Rel::GT: return Rel::LT;
    case Rel::GE: return Rel::LE;
    default: return r;
  }
}

Rel negate(Rel r) {
  switch (r) {
    case Rel::EQ: return Rel::NE;
    case Rel::NE: return Rel::EQ;
    case Rel::LT: return Rel::GE;
    case Rel::LE: return Rel::GT;
    case Rel::GT: return Rel::LE;
    case Rel::GE: return Rel::LT;
  }
  return r;
}

bool rel_holds(Rel r, int s) {
  switch (r) {
    case Rel::EQ: return s == 0;
    case Rel::NE: return s != 0;
    case Rel::LT: return s < 0;
    case Rel::LE: return s <= 0;
    case Rel::GT: return s > 0;
    case Rel::GE: return s >= 0;
  }
  return false;
}

namespace {

FormulaPtr node(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

Quantifier dual(Quantifier q) { return q == Quantifier::Exists ? Quantifier::Forall : Quantifier::Exists; }

}  // namespace

FormulaPtr make_true() {
  static const FormulaPtr t = node(Formula{});
  return t;
}

FormulaPtr make_false() {
  static const FormulaPtr f = [] { Formula g; g.kind = Formula::Kind::False; return node(g); }();
  return f;
}

FormulaPtr make_atom(Polynomial p, Rel r) {
  Formula f;
  f.kind = Formula::Kind::Atom;
  f.rel = r;
  f.poly = std::move(p);
  return node(std::move(f));
}

FormulaPtr make_root_atom(size_t var, Rel r, int index, Polynomial p) {
  if (index < 1) throw InvalidArgument("root index must be positive");
  Formula f;
  f.kind = Formula::Kind::RootAtom;
  f.rel = r;
  f.var = var;
  f.root_index = index;
  f.poly = std::move(p);
  return node(std::move(f));
}

namespace {

FormulaPtr make_nary(Formula::Kind kind, std::vector<FormulaPtr> args) {
  Formula::Kind unit = kind == Formula::Kind::And ? Formula::Kind::True : Formula::Kind::False;
  Formula::Kind zero = kind == Formula::Kind::And ? Formula::Kind::False : Formula::Kind::True;
  std::vector<FormulaPtr> flat;
  for (auto& a : args) {
    if (a->kind == unit) continue;
    if (a->kind == zero) return a;
    if (a->kind == kind)
      flat.insert(flat.end(), a->args.begin(), a->args.end());
    else
      flat.push_back(std::move(a));
  }
  if (flat.empty()) return kind == Formula::Kind::And ? make_true() : make_false();
  if (flat.size() == 1) return flat.front();
  Formula f;
  f.kind = kind;
  f.args = std::move(flat);
  return node(std::move(f));
}

}  // namespace

FormulaPtr make_and(std::vector<FormulaPtr> args) { return make_nary(Formula::Kind::And, std::move(args)); }
FormulaPtr make_or(std::vector<FormulaPtr> args) { return make_nary(Formula::Kind::Or, std::move(args)); }

FormulaPtr make_not(FormulaPtr a) {
  Formula f;
  f.kind = Formula::Kind::Not;
  f.args = {std::move(a)};
  return node(std::move(f));
}

FormulaPtr make_implies(FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.kind = Formula::Kind::Implies;
  f.args = {std::move(a), std::move(b)};
  return node(std::move(f));
}

FormulaPtr make_quantifier(Quantifier q, size_t var, FormulaPtr body) {
  Formula f;
  f.kind = Formula::Kind::Quant;
  f.quantifier = q;
  f.var = var;
  f.args = {std::move(body)};
  return node(std::move(f));
}

// ---------------------------------------------------------------- parsing

namespace {

using ExprPtr = std::shared_ptr<const Expr>;

struct Raw {
  Formula::Kind kind = Formula::Kind::True;
  Rel rel = Rel::EQ;
  Quantifier q = Quantifier::Exists;
  std::string var;
  size_t pos = 0;
  int root_index = 0;
  ExprPtr lhs, rhs;
  std::vector<std::unique_ptr<Raw>> args;
};
using RawPtr = std::unique_ptr<Raw>;

RawPtr raw(Formula::Kind k, size_t pos) {
  auto r = std::make_unique<Raw>();
  r->kind = k;
  r->pos = pos;
  return r;
}

bool is_reserved(const std::string& s) {
  return s == "exists" || s == "forall" || s == "true" || s == "false" || s.rfind("RootOf_", 0) == 0;
}

std::optional<Rel> rel_token(Tok t) {
  switch (t) {
    case Tok::Eq: return Rel::EQ;
    case Tok::Ne: return Rel::NE;
    case Tok::Lt: return Rel::LT;
    case Tok::Le: return Rel::LE;
    case Tok::Gt: return Rel::GT;
    case Tok::Ge: return Rel::GE;
    default: return std::nullopt;
  }
}

struct Side {
  ExprPtr expr;
  int root_index = 0;  // 0 for an ordinary polynomial
  size_t pos;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : ts_(detail::tokenize(text)) {}

  RawPtr parse_all() {
    auto f = formula();
    if (ts_.peek().kind != Tok::End) throw ParseError("unexpected trailing input", ts_.peek().pos);
    return f;
  }

 private:
  RawPtr formula() {
    auto lhs = disj();
    if (ts_.peek().kind == Tok::Implies) {
      size_t pos = ts_.next().pos;
      auto r = raw(Formula::Kind::Implies, pos);
      r->args.push_back(std::move(lhs));
      r->args.push_back(formula());
      return r;
    }
    return lhs;
  }

  RawPtr nary(Formula::Kind kind, Tok op, RawPtr (Parser::*sub)()) {
    auto first = (this->*sub)();
    if (ts_.peek().kind != op) return first;
    auto r = raw(kind, first->pos);
    r->args.push_back(std::move(first));
    while (ts_.accept(op)) r->args.push_back((this->*sub)());
    return r;
  }

  RawPtr disj() { return nary(Formula::Kind::Or, Tok::Or, &Parser::conj); }
  RawPtr conj() { return nary(Formula::Kind::And, Tok::And, &Parser::unary); }

  RawPtr unary() {
    const auto& t = ts_.peek();
    if (t.kind == Tok::Not) {
      auto r = raw(Formula::Kind::Not, ts_.next().pos);
      r->args.push_back(unary());
      return r;
    }
    if (t.kind == Tok::Ident && (t.text == "exists" || t.text == "forall")) {
      Quantifier q = t.text == "exists" ? Quantifier::Exists : Quantifier::Forall;
      size_t pos = ts_.next().pos;
      std::vector<std::pair<std::string, size_t>> vars;
      do {
        const auto& v = ts_.expect(Tok::Ident, "variable after quantifier");
        if (is_reserved(v.text)) throw ParseError("reserved word '" + v.text + "' used as a variable", v.pos);
        vars.emplace_back(v.text, v.pos);
      } while (ts_.accept(Tok::Comma));
      ts_.expect(Tok::Dot, "'.' after quantified variables");
      auto body = formula();
      for (size_t i = vars.size(); i-- > 0;) {
        auto r = raw(Formula::Kind::Quant, i == 0 ? pos : vars[i].second);
        r->q = q;
        r->var = vars[i].first;
        r->args.push_back(std::move(body));
        body = std::move(r);
      }
      return body;
    }
    if (t.kind == Tok::Ident && (t.text == "true" || t.text == "false")) {
      auto k = t.text == "true" ? Formula::Kind::True : Formula::Kind::False;
      return raw(k, ts_.next().pos);
    }
    if (t.kind == Tok::LParen) {
      size_t m = ts_.mark();
      try {
        return relation();
      } catch (const ParseError& rel_err) {
        ts_.reset(m);
        try {
          ts_.next();
          auto f = formula();
          ts_.expect(Tok::RParen, "')'");
          return f;
        } catch (const ParseError& f_err) {
          throw f_err.position() >= rel_err.position() ? f_err : rel_err;
        }
      }
    }
    return relation();
  }

  Side side() {
    const auto& t = ts_.peek();
    static const std::regex root_re("RootOf_([0-9]+)");
    std::smatch m;
    if (t.kind == Tok::Ident && std::regex_match(t.text, m, root_re) && ts_.peek(1).kind == Tok::LParen) {
      size_t pos = ts_.next().pos;
      int j = std::stoi(m[1].str());
      if (j < 1) throw ParseError("root index must be positive", pos);
      ts_.next();
      ExprPtr e = detail::parse_expr(ts_);
      ts_.expect(Tok::RParen, "')' after root polynomial");
      return {e, j, pos};
    }
    if (t.kind == Tok::Ident && is_reserved(t.text)) throw ParseError("unexpected '" + t.text + "'", t.pos);
    size_t pos = t.pos;
    return {ExprPtr(detail::parse_expr(ts_)), 0, pos};
  }

  RawPtr pair(const Side& a, Rel r, const Side& b) {
    if (!a.root_index && !b.root_index) {
      auto x = raw(Formula::Kind::Atom, a.pos);
      x->rel = r;
      x->lhs = a.expr;
      x->rhs = b.expr;
      return x;
    }
    if (a.root_index && b.root_index) throw ParseError("cannot compare two indexed roots", b.pos);
    const Side& root = a.root_index ? a : b;
    const Side& var = a.root_index ? b : a;
    if (var.expr->op != Expr::Op::Var) throw ParseError("an indexed root must be compared with a variable", var.pos);
    auto x = raw(Formula::Kind::RootAtom, a.pos);
    x->rel = a.root_index ? flip(r) : r;
    x->var = var.expr->name;
    x->root_index = root.root_index;
    x->rhs = root.expr;
    return x;
  }

  RawPtr relation() {
    Side a = side();
    auto r = rel_token(ts_.peek().kind);
    if (!r) throw ParseError("expected a relation", ts_.peek().pos);
    std::vector<RawPtr> parts;
    while (r) {
      ts_.next();
      Side b = side();
      parts.push_back(pair(a, *r, b));
      a = b;
      r = rel_token(ts_.peek().kind);
    }
    if (parts.size() == 1) return std::move(parts.front());
    auto x = raw(Formula::Kind::And, parts.front()->pos);
    x->args = std::move(parts);
    return x;
  }

  TokenStream ts_;
};

void raw_vars(const Raw& r, std::set<std::string>& bound, std::vector<std::string>& free_vars,
              std::vector<std::string>& binders) {
  auto add_free = [&](const std::string& v) {
    if (!bound.count(v) && std::find(free_vars.begin(), free_vars.end(), v) == free_vars.end()) free_vars.push_back(v);
  };
  auto add_expr = [&](const ExprPtr& e) {
    if (!e) return;
    std::vector<std::string> vs;
    detail::collect_vars(*e, vs);
    for (const auto& v : vs) add_free(v);
  };
  switch (r.kind) {
    case Formula::Kind::Atom:
      add_expr(r.lhs);
      add_expr(r.rhs);
      break;
    case Formula::Kind::RootAtom:
      add_expr(r.rhs);
      add_free(r.var);
      break;
    case Formula::Kind::Quant: {
      if (std::find(binders.begin(), binders.end(), r.var) == binders.end()) binders.push_back(r.var);
      bool fresh = bound.insert(r.var).second;
      raw_vars(*r.args[0], bound, free_vars, binders);
      if (fresh) bound.erase(r.var);
      break;
    }
    default:
      for (const auto& a : r.args) raw_vars(*a, bound, free_vars, binders);
  }
}

size_t var_index(const OrderPtr& order, const std::string& name, size_t pos) {
  auto i = order->index_of(name);
  if (!i) throw OrderError("unknown variable '" + name + "' at position " + std::to_string(pos));
  return *i;
}

FormulaPtr bind_raw(const Raw& r, const OrderPtr& order) {
  switch (r.kind) {
    case Formula::Kind::True: return make_true();
    case Formula::Kind::False: return make_false();
    case Formula::Kind::Atom:
      return make_atom(detail::to_polynomial(*r.lhs, order) - detail::to_polynomial(*r.rhs, order), r.rel);
    case Formula::Kind::RootAtom:
      return make_root_atom(var_index(order, r.var, r.pos), r.rel, r.root_index, detail::to_polynomial(*r.rhs, order));
    case Formula::Kind::Not: return make_not(bind_raw(*r.args[0], order));
    case Formula::Kind::Implies: return make_implies(bind_raw(*r.args[0], order), bind_raw(*r.args[1], order));
    case Formula::Kind::Quant: return make_quantifier(r.q, var_index(order, r.var, r.pos), bind_raw(*r.args[0], order));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> args;
      for (const auto& a : r.args) args.push_back(bind_raw(*a, order));
      return r.kind == Formula::Kind::And ? make_and(std::move(args)) : make_or(std::move(args));
    }
  }
  throw InternalError("unknown formula node");
}

}  // namespace

ParsedFormula parse_formula(std::string_view text, OrderPtr order) {
  Parser p(text);
  RawPtr r = p.parse_all();
  if (order) return {order, bind_raw(*r, order)};
  std::set<std::string> bound;
  std::vector<std::string> names, binders;
  raw_vars(*r, bound, names, binders);
  for (const auto& b : binders)
    if (std::find(names.begin(), names.end(), b) == names.end()) names.push_back(b);
  if (names.empty()) names.push_back("x");
  OrderPtr prov = make_order(names);
  FormulaPtr f = bind_raw(*r, prov);
  OrderPtr fin = prenex_order(f, prov);
  if (*fin == *prov) return {prov, f};
  return {fin, reorder(f, prov, fin)};
}

// --------------------------------------------------------------- printing

namespace {

int precedence(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Implies: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    default: return 4;
  }
}

std::string root_text(const Formula& f) { return "RootOf_" + std::to_string(f.root_index) + "(" + f.poly->to_string() + ")"; }

bool is_chain(const Formula& f) {
  if (f.kind != Formula::Kind::And || f.args.size() != 2) return false;
  const Formula &a = *f.args[0], &b = *f.args[1];
  return a.kind == Formula::Kind::RootAtom && b.kind == Formula::Kind::RootAtom && a.var == b.var &&
         (a.rel == Rel::GT || a.rel == Rel::GE) && (b.rel == Rel::LT || b.rel == Rel::LE);
}

std::string print(const Formula& f, const OrderPtr& order);

std::string child(const FormulaPtr& c, int min_prec, const OrderPtr& order) {
  std::string s = print(*c, order);
  bool paren = precedence(*c) < min_prec || c->kind == Formula::Kind::Quant;
  return paren ? "(" + s + ")" : s;
}

std::string print(const Formula& f, const OrderPtr& order) {
  switch (f.kind) {
    case Formula::Kind::True: return "true";
    case Formula::Kind::False: return "false";
    case Formula::Kind::Atom: return f.poly->to_string() + " " + rel_symbol(f.rel) + " 0";
    case Formula::Kind::RootAtom: {
      const std::string& x = order->name(f.var);
      if (f.rel == Rel::GT || f.rel == Rel::GE) return root_text(f) + " " + rel_symbol(flip(f.rel)) + " " + x;
      return x + " " + rel_symbol(f.rel) + " " + root_text(f);
    }
    case Formula::Kind::Not: {
      const auto& a = *f.args[0];
      bool bare = a.kind == Formula::Kind::Not || a.kind == Formula::Kind::True ||
                  a.kind == Formula::Kind::False;
      return bare ? "~" + print(a, order) : "~(" + print(a, order) + ")";
    }
    case Formula::Kind::Implies: return child(f.args[0], 2, order) + " -> " + child(f.args[1], 1, order);
    case Formula::Kind::Quant: {
      std::string s = std::string(f.quantifier == Quantifier::Exists ? "exists " : "forall ") + order->name(f.var);
      const Formula* body = f.args[0].get();
      for (; body->kind == Formula::Kind::Quant && body->quantifier == f.quantifier; body = body->args[0].get())
        s += ", " + order->name(body->var);
      return s + ". " + print(*body, order);
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      if (is_chain(f)) {
        const Formula &a = *f.args[0], &b = *f.args[1];
        return root_text(a) + " " + rel_symbol(flip(a.rel)) + " " + order->name(a.var) + " " + rel_symbol(b.rel) + " " +
               root_text(b);
      }
      bool conj = f.kind == Formula::Kind::And;
      std::string s;
      for (size_t i = 0; i < f.args.size(); ++i) {
        if (i) s += conj ? " /\\ " : " \\/ ";
        s += child(f.args[i], conj ? 4 : 3, order);
      }
      return s;
    }
  }
  return "?";
}

}  // namespace

std::string to_string(const FormulaPtr& f, const OrderPtr& order) { return print(*f, order); }

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->args.size() != b->args.size()) return false;
  switch (a->kind) {
    case Formula::Kind::Atom:
      if (a->rel != b->rel || !(*a->poly == *b->poly)) return false;
      break;
    case Formula::Kind::RootAtom:
      if (a->rel != b->rel || a->var != b->var || a->root_index != b->root_index || !(*a->poly == *b->poly)) return false;
      break;
    case Formula::Kind::Quant:
      if (a->quantifier != b->quantifier || a->var != b->var) return false;
      break;
    default: break;
  }
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  return true;
}

namespace {

template <class F>
FormulaPtr map_formula(const FormulaPtr& f, F&& leaf, const std::function<size_t(size_t)>& var_map) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False: return f;
    case Formula::Kind::Atom:
    case Formula::Kind::RootAtom: return leaf(f);
    case Formula::Kind::Not: return make_not(map_formula(f->args[0], leaf, var_map));
    case Formula::Kind::Implies:
      return make_implies(map_formula(f->args[0], leaf, var_map), map_formula(f->args[1], leaf, var_map));
    case Formula::Kind::Quant:
      return make_quantifier(f->quantifier, var_map(f->var), map_formula(f->args[0], leaf, var_map));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> args;
      for (const auto& a : f->args) args.push_back(map_formula(a, leaf, var_map));
      return f->kind == Formula::Kind::And ? make_and(std::move(args)) : make_or(std::move(args));
    }
  }
  return f;
}

}  // namespace

FormulaPtr reorder(const FormulaPtr& f, const OrderPtr& source, const OrderPtr& target) {
  auto leaf = [&](const FormulaPtr& a) -> FormulaPtr {
    if (a->kind == Formula::Kind::Atom) return make_atom(a->poly->reorder(target), a->rel);
    return make_root_atom(var_index(target, source->name(a->var), 0), a->rel, a->root_index, a->poly->reorder(target));
  };
  std::function<size_t(size_t)> vm = [&](size_t v) { return var_index(target, source->name(v), 0); };
  return map_formula(f, leaf, vm);
}

std::vector<Polynomial> atom_polynomials(const FormulaPtr& f) {
  std::vector<Polynomial> out;
  std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& g) {
    if (g->kind == Formula::Kind::Atom && std::find(out.begin(), out.end(), *g->poly) == out.end()) out.push_back(*g->poly);
    for (const auto& a : g->args) walk(a);
  };
  walk(f);
  return out;
}

bool is_quantifier_free(const FormulaPtr& f) {
  if (f->kind == Formula::Kind::Quant) return false;
  return std::all_of(f->args.begin(), f->args.end(), is_quantifier_free);
}

namespace {

void occurrences(const FormulaPtr& f, std::set<size_t>& bound, std::set<size_t>& free_out) {
  auto poly_vars = [&](const Polynomial& p) {
    for (size_t v = 0; v < p.num_vars(); ++v)
      if (p.depends_on(v) && !bound.count(v)) free_out.insert(v);
  };
  switch (f->kind) {
    case Formula::Kind::Atom: poly_vars(*f->poly); break;
    case Formula::Kind::RootAtom:
      poly_vars(*f->poly);
      if (!bound.count(f->var)) free_out.insert(f->var);
      break;
    case Formula::Kind::Quant: {
      bool fresh = bound.insert(f->var).second;
      occurrences(f->args[0], bound, free_out);
      if (fresh) bound.erase(f->var);
      break;
    }
    default:
      for (const auto& a : f->args) occurrences(a, bound, free_out);
  }
}

}  // namespace

std::vector<size_t> free_variables(const FormulaPtr& f) {
  std::set<size_t> bound, out;
  occurrences(f, bound, out);
  return {out.begin(), out.end()};
}

FormulaPtr substitute(const FormulaPtr& f, size_t var, const Rational& value) {
  if (f->kind == Formula::Kind::Quant && f->var == var) return f;
  auto leaf = [&](const FormulaPtr& a) -> FormulaPtr {
    if (a->kind == Formula::Kind::Atom) return make_atom(a->poly->substitute(var, value), a->rel);
    if (a->var == var) throw InvalidArgument("cannot substitute the variable compared with an indexed root");
    return make_root_atom(a->var, a->rel, a->root_index, a->poly->substitute(var, value));
  };
  std::function<FormulaPtr(const FormulaPtr&)> rec = [&](const FormulaPtr& g) -> FormulaPtr {
    if (g->kind == Formula::Kind::Quant) {
      if (g->var == var) return g;
      return make_quantifier(g->quantifier, g->var, rec(g->args[0]));
    }
    if (g->kind == Formula::Kind::Atom || g->kind == Formula::Kind::RootAtom) return leaf(g);
    if (g->kind == Formula::Kind::True || g->kind == Formula::Kind::False) return g;
    std::vector<FormulaPtr> args;
    for (const auto& a : g->args) args.push_back(rec(a));
    switch (g->kind) {
      case Formula::Kind::Not: return make_not(args[0]);
      case Formula::Kind::Implies: return make_implies(args[0], args[1]);
      case Formula::Kind::And: return make_and(std::move(args));
      default: return make_or(std::move(args));
    }
  };
  return rec(f);
}

bool evaluate_at(const FormulaPtr& f, const std::vector<Rational>& point) {
  switch (f->kind) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Atom: {
      std::vector<Rational> pt = point;
      pt.resize(f->poly->num_vars());
      return rel_holds(f->rel, sgn(f->poly->evaluate(pt)));
    }
    case Formula::Kind::RootAtom: {
      size_t v = f->var;
      std::vector<Rational> prefix(point.begin(), point.begin() + std::min(v, point.size()));
      prefix.resize(v);
      Polynomial q = f->poly->substitute_prefix(prefix);
      if (q.is_constant()) return false;
      if (q.main_var() != v) throw InvalidArgument("indexed root polynomial depends on a later variable");
      auto roots = isolate_roots(squarefree_part(q, v));
      if (f->root_index > static_cast<int>(roots.size())) return false;
      Rational x = v < point.size() ? point[v] : Rational(0);
      int c = compare(roots[f->root_index - 1], RealAlgebraicNumber::exact(x, q.order(), v));
      return rel_holds(f->rel, -c);
    }
    case Formula::Kind::Not: return !evaluate_at(f->args[0], point);
    case Formula::Kind::Implies: return !evaluate_at(f->args[0], point) || evaluate_at(f->args[1], point);
    case Formula::Kind::And:
      return std::all_of(f->args.begin(), f->args.end(), [&](const FormulaPtr& a) { return evaluate_at(a, point); });
    case Formula::Kind::Or:
      return std::any_of(f->args.begin(), f->args.end(), [&](const FormulaPtr& a) { return evaluate_at(a, point); });
    case Formula::Kind::Quant: throw InvalidArgument("evaluate_at needs a quantifier-free formula");
  }
  return false;
}

// ----------------------------------------------------------------- prenex

namespace {

struct Binder {
  size_t var;
  Quantifier kind;  // after pushing negations inward
  std::vector<size_t> ancestors;  // positions in the binder list
};

struct BinderInfo {
  std::vector<Binder> binders;  // preorder
  std::set<size_t> free_vars;
};

void collect_binders(const FormulaPtr& f, bool positive, std::vector<size_t>& stack, BinderInfo& info) {
  switch (f->kind) {
    case Formula::Kind::Not: collect_binders(f->args[0], !positive, stack, info); break;
    case Formula::Kind::Implies:
      collect_binders(f->args[0], !positive, stack, info);
      collect_binders(f->args[1], positive, stack, info);
      break;
    case Formula::Kind::Quant: {
      for (const auto& b : info.binders)
        if (b.var == f->var) throw InvalidArgument("variable bound more than once; rename one of the quantifiers");
      info.binders.push_back({f->var, positive ? f->quantifier : dual(f->quantifier), stack});
      stack.push_back(info.binders.size() - 1);
      collect_binders(f->args[0], positive, stack, info);
      stack.pop_back();
      break;
    }
    default:
      for (const auto& a : f->args) collect_binders(a, positive, stack, info);
  }
}

BinderInfo binder_info(const FormulaPtr& f) {
  BinderInfo info;
  std::vector<size_t> stack;
  collect_binders(f, true, stack, info);
  for (size_t v : free_variables(f)) info.free_vars.insert(v);
  for (const auto& b : info.binders)
    if (info.free_vars.count(b.var)) throw InvalidArgument("variable occurs both free and bound");
  return info;
}

FormulaPtr strip(const FormulaPtr& f) {
  if (f->kind == Formula::Kind::Quant) return strip(f->args[0]);
  if (is_quantifier_free(f)) return f;
  std::vector<FormulaPtr> args;
  for (const auto& a : f->args) args.push_back(strip(a));
  switch (f->kind) {
    case Formula::Kind::Not: return make_not(args[0]);
    case Formula::Kind::Implies: return make_implies(args[0], args[1]);
    case Formula::Kind::And: return make_and(std::move(args));
    default: return make_or(std::move(args));
  }
}

}  // namespace

FormulaPtr PrenexFormula::to_formula() const {
  FormulaPtr f = matrix;
  for (size_t b = blocks.size(); b-- > 0;)
    for (size_t i = blocks[b].vars.size(); i-- > 0;) f = make_quantifier(blocks[b].kind, blocks[b].vars[i], f);
  return f;
}

Quantifier PrenexFormula::kind_of(size_t v) const {
  for (const auto& b : blocks)
    if (std::find(b.vars.begin(), b.vars.end(), v) != b.vars.end()) return b.kind;
  throw InvalidArgument("variable is not quantified");
}

PrenexFormula prenex(const FormulaPtr& f, const OrderPtr& order) {
  BinderInfo info = binder_info(f);
  size_t n = order->size();
  PrenexFormula out;
  out.order = order;
  out.matrix = strip(f);
  std::vector<int> binder_of(n, -1);
  for (size_t i = 0; i < info.binders.size(); ++i) binder_of[info.binders[i].var] = static_cast<int>(i);
  size_t first_bound = n;
  for (size_t v = 0; v < n; ++v)
    if (binder_of[v] >= 0) {
      first_bound = v;
      break;
    }
  for (size_t v = first_bound; v < n; ++v)
    if (binder_of[v] < 0)
      throw InvalidArgument("variable '" + order->name(v) + "' is ordered after a quantified variable but is not quantified");
  for (const auto& b : info.binders)
    for (size_t a : b.ancestors) {
      const Binder& u = info.binders[a];
      if (u.kind != b.kind && u.var > b.var)
        throw InvalidArgument("variable order puts '" + order->name(b.var) + "' before '" + order->name(u.var) +
                              "', contradicting the quantifier nesting");
    }
  out.free_count = first_bound;
  for (size_t v = first_bound; v < n; ++v) {
    Quantifier k = info.binders[binder_of[v]].kind;
    if (out.blocks.empty() || out.blocks.back().kind != k) out.blocks.push_back({k, {}});
    out.blocks.back().vars.push_back(v);
  }
  return out;
}

OrderPtr prenex_order(const FormulaPtr& f, const OrderPtr& order) {
  BinderInfo info = binder_info(f);
  size_t m = info.binders.size();
  std::vector<std::string> names;
  std::set<size_t> bound;
  for (const auto& b : info.binders) bound.insert(b.var);
  for (size_t v = 0; v < order->size(); ++v)
    if (!bound.count(v)) names.push_back(order->name(v));
  if (m == 0) return make_order(names);

  auto greedy = [&](Quantifier start) {
    std::vector<size_t> seq;
    std::vector<bool> placed(m, false);
    Quantifier cur = start;
    size_t blocks = 0;
    while (seq.size() < m) {
      bool took = false;
      for (bool again = true; again;) {
        again = false;
        for (size_t i = 0; i < m; ++i) {
          const Binder& b = info.binders[i];
          if (placed[i] || b.kind != cur) continue;
          bool ready = std::all_of(b.ancestors.begin(), b.ancestors.end(), [&](size_t a) {
            return placed[a] || info.binders[a].kind == b.kind;
          });
          // Same-kind ancestors must not be left behind a different-kind one.
          for (size_t a : b.ancestors)
            if (!placed[a] && info.binders[a].kind == b.kind)
              for (size_t aa : info.binders[a].ancestors)
                if (!placed[aa] && info.binders[aa].kind != b.kind) ready = false;
          if (!ready) continue;
          placed[i] = true;
          seq.push_back(i);
          took = again = true;
        }
      }
      if (took) ++blocks;
      cur = dual(cur);
    }
    return std::make_pair(blocks, seq);
  };
  auto a = greedy(info.binders.front().kind);
  auto b = greedy(dual(info.binders.front().kind));
  const auto& best = b.first < a.first ? b.second : a.second;
  for (size_t i : best) names.push_back(order->name(info.binders[i].var));
  return make_order(names);
}

}  // namespace cadkit
