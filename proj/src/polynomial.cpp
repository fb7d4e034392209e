#include "cadkit/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "lexer.hpp"

namespace cadkit {

VarOrder::VarOrder(std::vector<std::string> names) : names_(std::move(names)) {
  for (size_t i = 0; i < names_.size(); ++i) {
    const auto& n = names_[i];
    if (n.empty() || !(std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_'))
      throw OrderError("invalid variable name '" + n + "'");
    for (size_t j = 0; j < i; ++j)
      if (names_[j] == n) throw OrderError("variable '" + n + "' repeated in order");
  }
}

std::optional<size_t> VarOrder::index_of(std::string_view name) const {
  for (size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

OrderPtr make_order(std::vector<std::string> names) {
  return std::make_shared<const VarOrder>(std::move(names));
}

OrderPtr parse_order(std::string_view text) {
  std::vector<std::string> names;
  std::string cur;
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) names.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) names.push_back(std::move(cur));
  if (names.empty()) throw OrderError("empty variable order");
  return make_order(std::move(names));
}

int compare_exponents(const Exponents& a, const Exponents& b) {
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

std::string to_string(const Rational& q) { return q.get_str(); }

bool display_before(const Exponents& a, const Exponents& b) {
  uint32_t da = 0, db = 0;
  for (auto e : a) da += e;
  for (auto e : b) db += e;
  if (da != db) return da > db;
  for (size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

Polynomial::Polynomial(OrderPtr order) : order_(std::move(order)) {
  if (!order_) throw InvalidArgument("polynomial requires a variable order");
}

Polynomial::Polynomial(OrderPtr order, const Rational& constant) : Polynomial(std::move(order)) {
  if (constant != 0) terms_.push_back({Exponents(order_->size(), 0), constant});
}

Polynomial Polynomial::variable(OrderPtr order, size_t var) {
  Polynomial p(std::move(order));
  if (var >= p.num_vars()) throw InvalidArgument("variable index out of range");
  Exponents e(p.num_vars(), 0);
  e[var] = 1;
  p.terms_.push_back({std::move(e), Rational(1)});
  return p;
}

Polynomial Polynomial::from_terms(OrderPtr order, std::vector<Term> terms) {
  Polynomial p(std::move(order));
  for (auto& t : terms)
    if (t.exps.size() != p.num_vars()) throw InvalidArgument("term arity does not match order");
  p.terms_ = std::move(terms);
  p.normalize_terms();
  return p;
}

void Polynomial::normalize_terms() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return compare_exponents(a.exps, b.exps) < 0; });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().exps == t.exps) {
      out.back().coef += t.coef;
    } else {
      if (!out.empty() && out.back().coef == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coef == 0) out.pop_back();
  terms_ = std::move(out);
}

void Polynomial::check_same_order(const Polynomial& o) const {
  if (order_ != o.order_ && !(*order_ == *o.order_))
    throw OrderError("polynomials over different variable orders");
}

bool Polynomial::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  for (auto e : terms_[0].exps)
    if (e) return false;
  return true;
}

Rational Polynomial::constant_value() const {
  if (!is_constant()) throw InvalidArgument("polynomial is not constant: " + to_string());
  return terms_.empty() ? Rational(0) : terms_[0].coef;
}

int Polynomial::degree(size_t var) const {
  if (terms_.empty()) return -1;
  uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.exps[var]);
  return static_cast<int>(d);
}

int Polynomial::total_degree() const {
  if (terms_.empty()) return -1;
  uint32_t d = 0;
  for (const auto& t : terms_) {
    uint32_t s = 0;
    for (auto e : t.exps) s += e;
    d = std::max(d, s);
  }
  return static_cast<int>(d);
}

size_t Polynomial::level() const {
  // The highest variable with positive exponent sits in the last term.
  if (terms_.empty()) return 0;
  const auto& e = terms_.back().exps;
  for (size_t i = e.size(); i-- > 0;)
    if (e[i]) return i + 1;
  return 0;
}

size_t Polynomial::main_var() const {
  size_t l = level();
  if (l == 0) throw InvalidArgument("constant polynomial has no main variable");
  return l - 1;
}

std::vector<Polynomial> Polynomial::coefficients(size_t var) const {
  int d = degree(var);
  std::vector<Polynomial> out(std::max(d, 0) + 1, Polynomial(order_));
  for (const auto& t : terms_) {
    Term c = t;
    uint32_t e = c.exps[var];
    c.exps[var] = 0;
    out[e].terms_.push_back(std::move(c));
  }
  return out;
}

Polynomial Polynomial::from_coefficients(const std::vector<Polynomial>& coeffs, size_t var) {
  if (coeffs.empty()) throw InvalidArgument("empty coefficient list");
  Polynomial p(coeffs[0].order());
  for (size_t i = 0; i < coeffs.size(); ++i) {
    for (const auto& t : coeffs[i].terms_) {
      if (t.exps[var]) throw InvalidArgument("coefficient depends on the main variable");
      Term c = t;
      c.exps[var] = static_cast<uint32_t>(i);
      p.terms_.push_back(std::move(c));
    }
  }
  p.normalize_terms();
  return p;
}

Polynomial Polynomial::leading_coefficient(size_t var) const {
  int d = degree(var);
  Polynomial out(order_);
  if (d < 0) return out;
  for (const auto& t : terms_) {
    if (t.exps[var] == static_cast<uint32_t>(d)) {
      Term c = t;
      c.exps[var] = 0;
      out.terms_.push_back(std::move(c));
    }
  }
  return out;
}

const Rational& Polynomial::leading_numeric() const {
  if (terms_.empty()) throw InvalidArgument("zero polynomial has no leading coefficient");
  return terms_.back().coef;
}

Polynomial Polynomial::derivative(size_t var) const {
  Polynomial out(order_);
  for (const auto& t : terms_) {
    if (t.exps[var] == 0) continue;
    Term c = t;
    c.coef *= c.exps[var];
    c.exps[var] -= 1;
    out.terms_.push_back(std::move(c));
  }
  out.normalize_terms();
  return out;
}

Polynomial Polynomial::substitute(size_t var, const Rational& value) const {
  int d = degree(var);
  if (d <= 0) return *this;
  std::vector<Rational> pw(d + 1);
  pw[0] = 1;
  for (int i = 1; i <= d; ++i) pw[i] = pw[i - 1] * value;
  Polynomial out(order_);
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    Term c = t;
    c.coef *= pw[c.exps[var]];
    c.exps[var] = 0;
    if (c.coef != 0) out.terms_.push_back(std::move(c));
  }
  out.normalize_terms();
  return out;
}

Polynomial Polynomial::substitute_prefix(const std::vector<Rational>& values) const {
  if (values.size() > num_vars()) throw InvalidArgument("too many substitution values");
  Polynomial out(order_);
  for (const auto& t : terms_) {
    Term c = t;
    for (size_t i = 0; i < values.size(); ++i) {
      if (c.exps[i]) {
        mpz_class num, den;
        mpz_pow_ui(num.get_mpz_t(), values[i].get_num_mpz_t(), c.exps[i]);
        mpz_pow_ui(den.get_mpz_t(), values[i].get_den_mpz_t(), c.exps[i]);
        c.coef *= Rational(num, den);
        c.exps[i] = 0;
      }
    }
    if (c.coef != 0) out.terms_.push_back(std::move(c));
  }
  out.normalize_terms();
  return out;
}

Rational Polynomial::evaluate(const std::vector<Rational>& values) const {
  if (values.size() < level()) throw InvalidArgument("not enough values to evaluate polynomial");
  Polynomial p = substitute_prefix(std::vector<Rational>(values.begin(), values.begin() + level()));
  return p.constant_value();
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result(order_, Rational(1));
  Polynomial base = *this;
  while (e) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& t : out.terms_) t.coef = -t.coef;
  return out;
}

namespace {

template <typename Combine>
std::vector<Polynomial::Term> merge_terms(const std::vector<Polynomial::Term>& a,
                                          const std::vector<Polynomial::Term>& b, Combine sign_b) {
  std::vector<Polynomial::Term> out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int c = i == a.size() ? 1 : j == b.size() ? -1 : compare_exponents(a[i].exps, b[j].exps);
    if (c < 0) {
      out.push_back(a[i++]);
    } else if (c > 0) {
      out.push_back({b[j].exps, sign_b(b[j].coef)});
      ++j;
    } else {
      Rational s = a[i].coef + sign_b(b[j].coef);
      if (s != 0) out.push_back({a[i].exps, std::move(s)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_same_order(o);
  terms_ = merge_terms(terms_, o.terms_, [](const Rational& c) { return c; });
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_same_order(o);
  terms_ = merge_terms(terms_, o.terms_, [](const Rational& c) { return Rational(-c); });
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_same_order(b);
  Polynomial out(a.order_);
  if (a.is_zero() || b.is_zero()) return out;
  out.terms_.reserve(a.terms_.size() * b.terms_.size());
  size_t n = a.num_vars();
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) {
      Polynomial::Term t{Exponents(n), x.coef * y.coef};
      for (size_t k = 0; k < n; ++k) t.exps[k] = x.exps[k] + y.exps[k];
      out.terms_.push_back(std::move(t));
    }
  }
  out.normalize_terms();
  return out;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coef *= c;
  return *this;
}

Polynomial Polynomial::shift(size_t var, unsigned e) const {
  Polynomial out = *this;
  for (auto& t : out.terms_) t.exps[var] += e;
  // Adding a common exponent keeps the storage order intact.
  return out;
}

std::optional<Polynomial> Polynomial::try_divide(const Polynomial& d) const {
  check_same_order(d);
  if (d.is_zero()) throw InvalidArgument("division by zero polynomial");
  Polynomial q(order_), r = *this;
  const Term& ld = d.terms_.back();
  size_t n = num_vars();
  while (!r.is_zero()) {
    const Term& lr = r.terms_.back();
    Term t{Exponents(n), lr.coef / ld.coef};
    for (size_t k = 0; k < n; ++k) {
      if (lr.exps[k] < ld.exps[k]) return std::nullopt;
      t.exps[k] = lr.exps[k] - ld.exps[k];
    }
    Polynomial tp(order_);
    tp.terms_.push_back(t);
    r -= tp * d;
    q.terms_.push_back(std::move(t));
  }
  q.normalize_terms();
  return q;
}

Polynomial Polynomial::divide_exact(const Polynomial& d) const {
  auto q = try_divide(d);
  if (!q) throw InvalidArgument("inexact division of " + to_string() + " by " + d.to_string());
  return *q;
}

Polynomial Polynomial::normalized() const {
  if (terms_.empty()) return *this;
  Integer l = 1, g = 0;
  for (const auto& t : terms_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coef.get_den_mpz_t());
  for (const auto& t : terms_) {
    Integer v = t.coef.get_num() * (l / t.coef.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  }
  Rational scale = make_rational(l, g);
  const Term* lead = &terms_.front();
  for (const auto& t : terms_)
    if (display_before(t.exps, lead->exps)) lead = &t;
  if (lead->coef < 0) scale = -scale;
  return *this * scale;
}

Polynomial Polynomial::reorder(const OrderPtr& target) const {
  std::vector<size_t> map(num_vars());
  for (size_t i = 0; i < num_vars(); ++i) {
    auto idx = target->index_of(order_->name(i));
    if (!idx) {
      if (degree(i) > 0) throw OrderError("variable '" + order_->name(i) + "' missing from order");
      map[i] = SIZE_MAX;
    } else {
      map[i] = *idx;
    }
  }
  std::vector<Term> ts;
  ts.reserve(terms_.size());
  for (const auto& t : terms_) {
    Term c{Exponents(target->size(), 0), t.coef};
    for (size_t i = 0; i < num_vars(); ++i)
      if (map[i] != SIZE_MAX) c.exps[map[i]] = t.exps[i];
    ts.push_back(std::move(c));
  }
  return from_terms(target, std::move(ts));
}

bool Polynomial::operator==(const Polynomial& o) const {
  check_same_order(o);
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].exps != o.terms_[i].exps || terms_[i].coef != o.terms_[i].coef) return false;
  return true;
}

std::strong_ordering Polynomial::operator<=>(const Polynomial& o) const {
  check_same_order(o);
  // Compare from the leading term down.
  size_t i = terms_.size(), j = o.terms_.size();
  while (i > 0 && j > 0) {
    --i;
    --j;
    int c = compare_exponents(terms_[i].exps, o.terms_[j].exps);
    if (c) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    int s = cmp(terms_[i].coef, o.terms_[j].coef);
    if (s) return s < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (i == j) return std::strong_ordering::equal;
  return i < j ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<const Term*> ts;
  for (const auto& t : terms_) ts.push_back(&t);
  auto tdeg = [](const Term* t) {
    uint32_t s = 0;
    for (auto e : t->exps) s += e;
    return s;
  };
  std::stable_sort(ts.begin(), ts.end(), [&](const Term* a, const Term* b) { return display_before(a->exps, b->exps); });
  std::ostringstream os;
  bool first = true;
  for (const Term* t : ts) {
    Rational c = t->coef;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool mono = tdeg(t) > 0;
    bool wrote = false;
    if (!mono || c != 1) {
      os << c.get_str();
      wrote = true;
    }
    for (size_t k = 0; k < t->exps.size(); ++k) {
      if (!t->exps[k]) continue;
      if (wrote) os << "*";
      os << order_->name(k);
      if (t->exps[k] > 1) os << "^" << t->exps[k];
      wrote = true;
    }
  }
  return os.str();
}

Polynomial parse_polynomial(std::string_view text, const OrderPtr& order) {
  detail::TokenStream ts(detail::tokenize(text));
  auto e = detail::parse_expr(ts);
  if (ts.peek().kind != detail::Tok::End) throw ParseError("unexpected trailing input", ts.peek().pos);
  return detail::to_polynomial(*e, order);
}

}  // namespace cadkit
