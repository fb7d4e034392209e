#pragma once

// Tokenizer and polynomial-expression parser shared by the polynomial,
// formula and CCD-tree readers.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cadkit/polynomial.hpp"

namespace cadkit::detail {

enum class Tok {
  Ident,
  Number,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  LParen,
  RParen,
  Comma,
  Dot,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  And,
  Or,
  Not,
  Implies,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  size_t pos;
};

std::vector<Token> tokenize(std::string_view text);

/// Polynomial expression tree, kept unbound so that a variable order can be
/// chosen after the whole input has been read.
struct Expr {
  enum class Op { Num, Var, Add, Sub, Mul, Div, Neg, Pow };
  Op op;
  Rational value;
  std::string name;
  unsigned exponent = 0;
  std::unique_ptr<Expr> lhs, rhs;
  size_t pos = 0;
};

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}
  const Token& peek(size_t ahead = 0) const {
    size_t i = std::min(idx_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& next() {
    const Token& t = toks_[idx_];
    if (idx_ + 1 < toks_.size()) ++idx_;
    return t;
  }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }
  const Token& expect(Tok k, const char* what);
  size_t mark() const { return idx_; }
  void reset(size_t m) { idx_ = m; }

 private:
  std::vector<Token> toks_;
  size_t idx_ = 0;
};

/// expr := term (('+'|'-') term)*   term := unary (('*'|'/') unary)*
/// unary := ('-'|'+') unary | atom ('^' INT)?   atom := NUM | IDENT | '(' expr ')'
std::unique_ptr<Expr> parse_expr(TokenStream& ts);

void collect_vars(const Expr& e, std::vector<std::string>& out);
Polynomial to_polynomial(const Expr& e, const OrderPtr& order);

}  // namespace cadkit::detail
