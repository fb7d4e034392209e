#include "lexer.hpp"

#include <algorithm>
#include <cctype>

namespace cadkit::detail {

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  size_t i = 0;
  auto push = [&](Tok k, size_t len) {
    out.push_back({k, std::string(text.substr(i, len)), i});
    i += len;
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      push(Tok::Number, j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      push(Tok::Ident, j - i);
      continue;
    }
    auto two = text.substr(i, 2);
    if (two == "/\\") { push(Tok::And, 2); continue; }
    if (two == "\\/") { push(Tok::Or, 2); continue; }
    if (two == "->") { push(Tok::Implies, 2); continue; }
    if (two == "!=") { push(Tok::Ne, 2); continue; }
    if (two == "<=") { push(Tok::Le, 2); continue; }
    if (two == ">=") { push(Tok::Ge, 2); continue; }
    switch (c) {
      case '+': push(Tok::Plus, 1); continue;
      case '-': push(Tok::Minus, 1); continue;
      case '*': push(Tok::Star, 1); continue;
      case '/': push(Tok::Slash, 1); continue;
      case '^': push(Tok::Caret, 1); continue;
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      case '.': push(Tok::Dot, 1); continue;
      case '=': push(Tok::Eq, 1); continue;
      case '<': push(Tok::Lt, 1); continue;
      case '>': push(Tok::Gt, 1); continue;
      case '~': push(Tok::Not, 1); continue;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
  }
  out.push_back({Tok::End, "", text.size()});
  return out;
}

const Token& TokenStream::expect(Tok k, const char* what) {
  if (peek().kind != k) throw ParseError(std::string("expected ") + what, peek().pos);
  return next();
}

namespace {

std::unique_ptr<Expr> make(Expr::Op op, size_t pos) {
  auto e = std::make_unique<Expr>();
  e->op = op;
  e->pos = pos;
  return e;
}

std::unique_ptr<Expr> parse_unary(TokenStream& ts);

std::unique_ptr<Expr> parse_atom(TokenStream& ts) {
  const Token& t = ts.peek();
  std::unique_ptr<Expr> e;
  if (t.kind == Tok::Number) {
    e = make(Expr::Op::Num, t.pos);
    e->value = Rational(Integer(t.text));
    ts.next();
  } else if (t.kind == Tok::Ident) {
    e = make(Expr::Op::Var, t.pos);
    e->name = t.text;
    ts.next();
  } else if (t.kind == Tok::LParen) {
    ts.next();
    e = parse_expr(ts);
    ts.expect(Tok::RParen, "')'");
  } else {
    throw ParseError("expected a number, variable or '('", t.pos);
  }
  if (ts.peek().kind == Tok::Caret) {
    size_t pos = ts.next().pos;
    const Token& n = ts.expect(Tok::Number, "an integer exponent");
    auto p = make(Expr::Op::Pow, pos);
    Integer ex(n.text);
    if (ex > 4096) throw ParseError("exponent too large", n.pos);
    p->exponent = static_cast<unsigned>(ex.get_ui());
    p->lhs = std::move(e);
    e = std::move(p);
  }
  return e;
}

std::unique_ptr<Expr> parse_unary(TokenStream& ts) {
  const Token& t = ts.peek();
  if (t.kind == Tok::Minus) {
    ts.next();
    auto e = make(Expr::Op::Neg, t.pos);
    e->lhs = parse_unary(ts);
    return e;
  }
  if (t.kind == Tok::Plus) {
    ts.next();
    return parse_unary(ts);
  }
  return parse_atom(ts);
}

std::unique_ptr<Expr> parse_term(TokenStream& ts) {
  auto lhs = parse_unary(ts);
  while (ts.peek().kind == Tok::Star || ts.peek().kind == Tok::Slash) {
    const Token& op = ts.next();
    auto e = make(op.kind == Tok::Star ? Expr::Op::Mul : Expr::Op::Div, op.pos);
    e->lhs = std::move(lhs);
    e->rhs = parse_unary(ts);
    lhs = std::move(e);
  }
  return lhs;
}

}  // namespace

std::unique_ptr<Expr> parse_expr(TokenStream& ts) {
  auto lhs = parse_term(ts);
  while (ts.peek().kind == Tok::Plus || ts.peek().kind == Tok::Minus) {
    const Token& op = ts.next();
    auto e = make(op.kind == Tok::Plus ? Expr::Op::Add : Expr::Op::Sub, op.pos);
    e->lhs = std::move(lhs);
    e->rhs = parse_term(ts);
    lhs = std::move(e);
  }
  return lhs;
}

void collect_vars(const Expr& e, std::vector<std::string>& out) {
  if (e.op == Expr::Op::Var) {
    if (std::find(out.begin(), out.end(), e.name) == out.end()) out.push_back(e.name);
    return;
  }
  if (e.lhs) collect_vars(*e.lhs, out);
  if (e.rhs) collect_vars(*e.rhs, out);
}

Polynomial to_polynomial(const Expr& e, const OrderPtr& order) {
  switch (e.op) {
    case Expr::Op::Num:
      return Polynomial(order, e.value);
    case Expr::Op::Var: {
      auto idx = order->index_of(e.name);
      if (!idx) throw OrderError("unknown variable '" + e.name + "' at position " + std::to_string(e.pos));
      return Polynomial::variable(order, *idx);
    }
    case Expr::Op::Add:
      return to_polynomial(*e.lhs, order) + to_polynomial(*e.rhs, order);
    case Expr::Op::Sub:
      return to_polynomial(*e.lhs, order) - to_polynomial(*e.rhs, order);
    case Expr::Op::Mul:
      return to_polynomial(*e.lhs, order) * to_polynomial(*e.rhs, order);
    case Expr::Op::Div: {
      Polynomial d = to_polynomial(*e.rhs, order);
      if (!d.is_constant() || d.is_zero())
        throw ParseError("division is only allowed by a nonzero constant", e.pos);
      Rational inv = 1 / d.constant_value();
      return to_polynomial(*e.lhs, order) * inv;
    }
    case Expr::Op::Neg:
      return -to_polynomial(*e.lhs, order);
    case Expr::Op::Pow:
      return to_polynomial(*e.lhs, order).pow(e.exponent);
  }
  throw InternalError("unreachable expression kind");
}

}  // namespace cadkit::detail
