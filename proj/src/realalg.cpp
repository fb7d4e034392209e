#include "cadkit/realalg.hpp"

#include <algorithm>
#include <sstream>

#include "cadkit/polyarith.hpp"

namespace cadkit {

Sign sign_of(const Rational& q) {
  int s = sgn(q);
  return s < 0 ? Sign::Negative : s > 0 ? Sign::Positive : Sign::Zero;
}

const char* sign_symbol(Sign s) {
  switch (s) {
    case Sign::Negative:
      return "-";
    case Sign::Zero:
      return "0";
    case Sign::Positive:
      return "+";
  }
  return "?";
}

RealAlgebraicNumber::RealAlgebraicNumber(Polynomial defining, size_t var, Rational lo, Rational hi)
    : defining_(std::make_shared<const Polynomial>(std::move(defining))), var_(var) {
  if (!(lo < hi)) throw InvalidArgument("isolating interval must satisfy lo < hi");
  iso_ = {Interval::Kind::Open, std::move(lo), std::move(hi)};
}

RealAlgebraicNumber RealAlgebraicNumber::exact(const Rational& value, const OrderPtr& order, size_t var) {
  Polynomial def = (Polynomial::variable(order, var) - Polynomial(order, value)).normalized();
  RealAlgebraicNumber r(def, var, value - 1, value + 1);
  r.iso_ = {Interval::Kind::Point, value, value};
  return r;
}

const Rational& RealAlgebraicNumber::exact_value() const {
  if (!is_exact()) throw InvalidArgument("algebraic number is not given exactly");
  return iso_.lo;
}

std::string RealAlgebraicNumber::to_string() const {
  if (is_exact()) return iso_.lo.get_str();
  return "root of " + defining_->to_string() + " in (" + iso_.lo.get_str() + ", " + iso_.hi.get_str() + ")";
}

bool is_rational(const Coordinate& c) {
  if (std::holds_alternative<Rational>(c)) return true;
  return std::get<RealAlgebraicNumber>(c).is_exact();
}

std::string coordinate_to_string(const Coordinate& c) {
  if (auto q = std::get_if<Rational>(&c)) return q->get_str();
  return std::get<RealAlgebraicNumber>(c).to_string();
}

std::string decimal(const Rational& q, int digits) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Rational v = q * scale;
  bool neg = v < 0;
  if (neg) v = -v;
  // Round half up on the magnitude.
  Integer n = (v.get_num() * 2 + v.get_den()) / (v.get_den() * 2);
  std::string s = n.get_str();
  if (digits > 0) {
    if (static_cast<int>(s.size()) <= digits) s = std::string(digits + 1 - s.size(), '0') + s;
    s.insert(s.size() - digits, ".");
  }
  if (neg && n != 0) s = "-" + s;
  return s;
}

namespace {

Rational rpow(const Rational& q, unsigned e) {
  Integer n, d;
  mpz_pow_ui(n.get_mpz_t(), q.get_num_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), q.get_den_mpz_t(), e);
  return Rational(n, d);
}

bool only_var(const Polynomial& p, size_t var) {
  for (const auto& t : p.terms())
    for (size_t i = 0; i < t.exps.size(); ++i)
      if (i != var && t.exps[i]) return false;
  return true;
}

// Dense univariate polynomial with integer coefficients, low degree first.
struct UPoly {
  std::vector<Integer> c;
  int deg() const { return static_cast<int>(c.size()) - 1; }
};

UPoly to_upoly(const Polynomial& p, size_t var) {
  Polynomial n = p.normalized();
  UPoly u;
  for (const auto& k : n.coefficients(var)) u.c.push_back(k.constant_value().get_num());
  while (!u.c.empty() && u.c.back() == 0) u.c.pop_back();
  return u;
}

int usign(const UPoly& u, const Rational& x) {
  // Homogeneous evaluation: sum c_i a^i b^(d-i) for x = a/b with b > 0.
  const Integer& a = x.get_num();
  const Integer& b = x.get_den();
  Integer acc = 0, bp = 1;
  for (int i = u.deg(); i >= 0; --i) {
    acc = acc * a + u.c[i] * bp;
    bp *= b;
  }
  return sgn(acc);
}

int count_variations(const std::vector<int>& s) {
  int v = 0, last = 0;
  for (int x : s) {
    if (!x) continue;
    if (last && x != last) ++v;
    last = x;
  }
  return v;
}

// Sign variations of (1+z)^d u((l + h z)/(1 + z)), bounding the roots in (l, h).
int udescartes(const UPoly& u, const Rational& l, const Rational& h) {
  int d = u.deg();
  Integer D;
  mpz_lcm(D.get_mpz_t(), l.get_den_mpz_t(), h.get_den_mpz_t());
  Integer L = l.get_num() * (D / l.get_den());
  Integer H = h.get_num() * (D / h.get_den());
  Integer W = H - L;
  // q(x) = D^d u((L + W x) / D)
  std::vector<Integer> q{u.c[d]};
  Integer dp = 1;
  for (int j = d - 1; j >= 0; --j) {
    dp *= D;
    std::vector<Integer> nq(q.size() + 1, 0);
    for (size_t i = 0; i < q.size(); ++i) {
      nq[i] += q[i] * L;
      nq[i + 1] += q[i] * W;
    }
    nq[0] += u.c[j] * dp;
    q = std::move(nq);
  }
  std::reverse(q.begin(), q.end());
  for (int i = 0; i < d; ++i)
    for (int j = d - 1; j >= i; --j) q[j] += q[j + 1];
  std::vector<int> s;
  for (auto& x : q) s.push_back(sgn(x));
  return count_variations(s);
}

Rational cauchy_power_of_two(const Rational& bound) {
  Rational b = 1;
  while (b <= bound) b *= 2;
  return b;
}

struct UIsolated {
  bool exact;
  Rational lo, hi;
};

void uisolate_rec(const UPoly& u, const Rational& l, const Rational& h, std::vector<UIsolated>& out) {
  int v = udescartes(u, l, h);
  if (v == 0) return;
  if (v == 1) {
    // A neighbouring midpoint may have been a root; move such endpoints
    // inwards so that isolating intervals never end on a root.
    Rational a = l, b = h;
    while (usign(u, a) == 0 || usign(u, b) == 0) {
      Rational c = (a + b) / 2;
      if (usign(u, c) == 0) {
        out.push_back({true, c, c});
        return;
      }
      if (udescartes(u, a, c) == 1) b = c;
      else a = c;
    }
    out.push_back({false, a, b});
    return;
  }
  Rational m = (l + h) / 2;
  uisolate_rec(u, l, m, out);
  if (usign(u, m) == 0) out.push_back({true, m, m});
  uisolate_rec(u, m, h, out);
}

// Isolates the roots of a square-free integer polynomial and detects the
// rational ones.
std::vector<UIsolated> uisolate(const UPoly& u) {
  std::vector<UIsolated> out;
  int d = u.deg();
  if (d < 1) return out;
  Integer mx = 0;
  for (int i = 0; i < d; ++i) mx = std::max(mx, Integer(abs(u.c[i])));
  Integer lc = abs(u.c[d]);
  Rational B = cauchy_power_of_two(1 + make_rational(mx, lc));
  uisolate_rec(u, -B, B, out);
  for (auto& r : out) {
    if (r.exact) continue;
    // A rational root k/lc must be the only candidate once the interval is
    // narrower than 1/lc.
    int s_lo = usign(u, r.lo);
    while ((r.hi - r.lo) * lc >= 1) {
      Rational m = (r.lo + r.hi) / 2;
      int s = usign(u, m);
      if (s == 0) {
        r = {true, m, m};
        break;
      }
      if (s == s_lo) r.lo = m;
      else r.hi = m;
    }
    if (r.exact) continue;
    Rational lol = r.lo * lc;
    Integer k;
    mpz_fdiv_q(k.get_mpz_t(), lol.get_num_mpz_t(), lol.get_den_mpz_t());
    k += 1;
    Rational cand = make_rational(k, lc);
    if (cand < r.hi && usign(u, cand) == 0) r = {true, cand, cand};
  }
  return out;
}

}  // namespace

PointContext::PointContext(const SamplePoint& s) {
  for (const auto& c : s.coords) push(c);
  if (s.coords.empty()) cache_.resize(1);
}

SamplePoint PointContext::sample() const {
  SamplePoint s;
  for (const auto& sl : slots_) s.coords.push_back(sl.c);
  return s;
}

void PointContext::push(const Coordinate& c) {
  if (auto r = std::get_if<RealAlgebraicNumber>(&c); r && r->is_exact())
    slots_.push_back({r->exact_value()});
  else
    slots_.push_back({c});
  cache_.resize(slots_.size() + 1);
}

void PointContext::pop() {
  if (slots_.empty()) throw InternalError("pop on empty point");
  slots_.pop_back();
  cache_.resize(slots_.size() + 1);
}

Polynomial PointContext::reduce(const Polynomial& f, size_t n) const {
  bool any = false;
  for (size_t i = 0; i < n; ++i)
    if (std::holds_alternative<Rational>(slots_[i].c) && f.degree(i) > 0) any = true;
  if (!any) return f;
  std::vector<Polynomial::Term> ts;
  for (const auto& t : f.terms()) {
    Polynomial::Term c = t;
    for (size_t i = 0; i < n; ++i) {
      if (!c.exps[i]) continue;
      if (auto q = std::get_if<Rational>(&slots_[i].c)) {
        c.coef *= rpow(*q, c.exps[i]);
        c.exps[i] = 0;
      }
    }
    if (c.coef != 0) ts.push_back(std::move(c));
  }
  return Polynomial::from_terms(f.order(), std::move(ts));
}

PointContext::Range PointContext::coord_range(size_t i) const {
  if (auto q = std::get_if<Rational>(&slots_[i].c)) return {*q, *q};
  const auto& iv = std::get<RealAlgebraicNumber>(slots_[i].c).interval();
  return {iv.lo, iv.hi};
}

PointContext::Range PointContext::enclosure(const Polynomial& f, size_t n) const {
  std::vector<Range> rs;
  for (size_t i = 0; i < n; ++i) rs.push_back(coord_range(i));
  auto mul = [](const Range& a, const Range& b) {
    Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return Range{*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
  };
  auto pw = [](const Range& a, unsigned e) {
    Rational l = rpow(a.lo, e), h = rpow(a.hi, e);
    if (e % 2 == 1 || a.lo >= 0) return Range{l, h};
    if (a.hi <= 0) return Range{h, l};
    return Range{Rational(0), std::max(l, h)};
  };
  Range sum{0, 0};
  for (const auto& t : f.terms()) {
    Range r{1, 1};
    for (size_t i = 0; i < t.exps.size(); ++i) {
      if (!t.exps[i]) continue;
      if (i >= n) throw InternalError("enclosure of a polynomial beyond the point");
      r = mul(r, pw(rs[i], t.exps[i]));
    }
    if (t.coef >= 0) {
      sum.lo += t.coef * r.lo;
      sum.hi += t.coef * r.hi;
    } else {
      sum.lo += t.coef * r.hi;
      sum.hi += t.coef * r.lo;
    }
  }
  return sum;
}

Sign PointContext::lo_sign(RealAlgebraicNumber& r, size_t n) {
  if (!r.lo_sign_) {
    Sign s = sign(r.defining().substitute(n, r.iso_.lo), n);
    if (s == Sign::Zero) throw InternalError("isolating interval endpoint is a root");
    r.lo_sign_ = s;
  }
  return *r.lo_sign_;
}

void PointContext::bisect_over(Coordinate& c, size_t n) {
  auto r = std::get_if<RealAlgebraicNumber>(&c);
  if (!r) return;
  if (r->is_exact()) {
    c = Rational(r->exact_value());
    return;
  }
  Sign ls = lo_sign(*r, n);
  Rational m = (r->iso_.lo + r->iso_.hi) / 2;
  Sign s = sign(r->defining().substitute(n, m), n);
  if (s == Sign::Zero) {
    c = m;
    return;
  }
  if (s == ls) r->iso_.lo = m;
  else r->iso_.hi = m;
}

void PointContext::bisect_slot(size_t i) {
  // Work on a copy: recursive sign calls only touch slots below i, but the
  // slot may be replaced by an exact value.
  Coordinate c = slots_[i].c;
  bisect_over(c, i);
  slots_[i].c = std::move(c);
}

void PointContext::refine_prefix(size_t n) {
  for (size_t i = 0; i < n; ++i)
    if (std::holds_alternative<RealAlgebraicNumber>(slots_[i].c)) bisect_slot(i);
}

Sign PointContext::sign(const Polynomial& f) { return sign(f, size()); }

Sign PointContext::sign(const Polynomial& f, size_t n) {
  if (f.level() > n) throw InvalidArgument("polynomial uses variables beyond the point: " + f.to_string());
  Polynomial g = reduce(f, n);
  if (g.is_constant()) return sign_of(g.constant_value());
  size_t t = g.main_var();
  auto it = cache_[t + 1].find(g);
  if (it != cache_[t + 1].end()) return it->second;
  Sign s = sign_uncached(g, t + 1);
  cache_[t + 1].emplace(std::move(g), s);
  return s;
}

Sign PointContext::sign_uncached(const Polynomial& g, size_t n) {
  for (int attempt = 0; attempt < 3; ++attempt) {
    Range r = enclosure(g, n);
    if (r.lo > 0) return Sign::Positive;
    if (r.hi < 0) return Sign::Negative;
    if (r.lo == 0 && r.hi == 0) return Sign::Zero;
    if (attempt < 2) refine_prefix(n);
  }
  if (is_zero_at(g, n)) return Sign::Zero;
  while (true) {
    refine_prefix(n);
    Range r = enclosure(g, n);
    if (r.lo > 0) return Sign::Positive;
    if (r.hi < 0) return Sign::Negative;
  }
}

Polynomial PointContext::truncate(const Polynomial& f, size_t var) {
  if (f.is_zero()) return f;
  auto cs = f.coefficients(var);
  while (!cs.empty() && sign(cs.back(), var) == Sign::Zero) cs.pop_back();
  if (cs.empty()) return Polynomial(f.order());
  return Polynomial::from_coefficients(cs, var);
}

int PointContext::gcd_degree(const Polynomial& a, const Polynomial& b, size_t var) {
  if (only_var(a, var) && only_var(b, var)) return gcd(a, b).degree(var);
  int n = b.degree(var);
  for (int j = 0; j < n; ++j) {
    if (sign(principal_subresultant_coefficient(a, b, var, j), var) != Sign::Zero) return j;
  }
  return n;
}

bool PointContext::is_zero_at(const Polynomial& f, size_t n) {
  Polynomial g = reduce(f, n);
  if (g.is_constant()) return g.is_zero();
  size_t t = g.main_var();
  if (t + 1 < n) return is_zero_at(g, t + 1);
  const auto& r = std::get<RealAlgebraicNumber>(slots_[t].c);
  Polynomial q = reduce(r.defining(), t);
  Rational lo = r.interval().lo, hi = r.interval().hi;
  Polynomial b = truncate(prem(g, q, t), t);
  if (b.is_zero()) return true;
  if (b.degree(t) == 0) return false;
  Polynomial gg(g.order());
  if (only_var(q, t) && only_var(b, t)) {
    gg = gcd(q, b);
    if (gg.degree(t) == 0) return false;
  } else {
    int h = gcd_degree(q, b, t);
    if (h == 0) return false;
    gg = h == b.degree(t) ? b : subresultant(q, b, t, h);
  }
  Sign sl = sign(gg.substitute(t, lo), t), sh = sign(gg.substitute(t, hi), t);
  return to_int(sl) * to_int(sh) < 0;
}

bool PointContext::nullified(const Polynomial& p) {
  size_t var = size();
  Polynomial f = reduce(p, var);
  if (f.is_zero()) return true;
  for (const auto& c : f.coefficients(var))
    if (sign(c, var) != Sign::Zero) return false;
  return true;
}

std::vector<PointContext::Root> PointContext::roots(const Polynomial& p) {
  size_t var = size();
  if (p.level() > var + 1) throw InvalidArgument("polynomial has variables above the lifting variable");
  Polynomial f = reduce(p, var);
  if (f.is_zero()) throw InvalidArgument("polynomial vanishes identically over the point");
  if (only_var(f, var)) return roots_univariate(f, var);
  return roots_general(f, var);
}

std::vector<PointContext::Root> PointContext::roots_univariate(const Polynomial& f, size_t var) {
  std::vector<Root> out;
  if (f.degree(var) <= 0) return out;
  // Square-free decomposition (Yun).
  std::vector<std::pair<Polynomial, unsigned>> parts;
  Polynomial a = f.normalized();
  Polynomial c = gcd(a, a.derivative(var));
  Polynomial w = a.divide_exact(c);
  unsigned mult = 1;
  while (w.degree(var) > 0) {
    Polynomial y = gcd(w, c);
    Polynomial z = w.divide_exact(y);
    if (z.degree(var) > 0) parts.push_back({z.normalized(), mult});
    ++mult;
    w = y;
    c = c.divide_exact(y);
  }
  for (const auto& [z, m] : parts) {
    auto iso = uisolate(to_upoly(z, var));
    Polynomial def = z;
    for (const auto& r : iso) {
      if (!r.exact) continue;
      Polynomial lin = Polynomial::variable(f.order(), var) * Rational(r.lo.get_den()) -
                       Polynomial(f.order(), Rational(r.lo.get_num()));
      def = def.divide_exact(lin);
    }
    auto shared = std::make_shared<const Polynomial>(def.normalized());
    std::vector<Root> these;
    for (const auto& r : iso) {
      if (r.exact) {
        these.push_back({r.lo, m});
      } else {
        RealAlgebraicNumber ran(Polynomial(f.order()), var, r.lo, r.hi);
        ran.defining_ = shared;
        these.push_back({std::move(ran), m});
      }
    }
    // Merge the ascending lists; factors are coprime so no roots coincide.
    std::vector<Root> merged;
    size_t i = 0, j = 0;
    while (i < out.size() || j < these.size()) {
      if (j == these.size() || (i < out.size() && compare(out[i].value, these[j].value) < 0))
        merged.push_back(std::move(out[i++]));
      else
        merged.push_back(std::move(these[j++]));
    }
    out = std::move(merged);
  }
  return out;
}

std::vector<PointContext::Root> PointContext::roots_general(const Polynomial& f, size_t var) {
  size_t n = var;
  Polynomial pt = truncate(f, var);
  if (pt.is_zero()) throw InvalidArgument("polynomial vanishes identically over the point");
  int d = pt.degree(var);
  std::vector<Root> out;
  if (d == 0) return out;
  Polynomial dp = pt.derivative(var);
  int h = d == 1 ? 0 : gcd_degree(pt, dp, var);
  Polynomial a = pt;
  if (h > 0) {
    Polynomial g = h == dp.degree(var) ? dp : subresultant(pt, dp, var, h);
    a = pseudo_divide(pt, g, var).quotient;
  }
  a = a.normalized();
  int da = a.degree(var);
  auto cs = a.coefficients(var);
  auto encl = [&] {
    std::vector<Range> e;
    for (const auto& c : cs) e.push_back(enclosure(c, n));
    return e;
  };
  auto contains_zero = [](const Range& r) { return r.lo <= 0 && r.hi >= 0; };
  std::vector<Range> E = encl();
  while (contains_zero(E[da])) {
    refine_prefix(n);
    E = encl();
  }
  auto mag = [](const Range& r) { return std::max(Rational(abs(r.lo)), Rational(abs(r.hi))); };
  Rational lc_min = std::min(Rational(abs(E[da].lo)), Rational(abs(E[da].hi)));
  Rational mx = 0;
  for (int j = 0; j < da; ++j) mx = std::max(mx, mag(E[j]));
  Rational B = cauchy_power_of_two(1 + mx / lc_min);

  auto shared = std::make_shared<const Polynomial>(a);
  // Coefficients of the transformed polynomial are fixed linear combinations
  // of the coefficients of a; their signs are decided by enclosure when
  // possible and exactly otherwise.
  auto variations = [&](const Rational& l, const Rational& hh) {
    std::vector<std::vector<Rational>> w(da + 1, std::vector<Rational>(da + 1));
    for (int j = 0; j <= da; ++j) {
      // (l + hh z)^j (1 + z)^(da - j)
      std::vector<Rational> e{Rational(1)};
      for (int k = 0; k < j; ++k) {
        std::vector<Rational> ne(e.size() + 1);
        for (size_t i = 0; i < e.size(); ++i) {
          ne[i] += e[i] * l;
          ne[i + 1] += e[i] * hh;
        }
        e = std::move(ne);
      }
      for (int k = j; k < da; ++k) {
        std::vector<Rational> ne(e.size() + 1);
        for (size_t i = 0; i < e.size(); ++i) {
          ne[i] += e[i];
          ne[i + 1] += e[i];
        }
        e = std::move(ne);
      }
      for (int i = 0; i <= da; ++i) w[i][j] = e[i];
    }
    std::vector<Range> ce = encl();
    std::vector<int> signs;
    for (int i = 0; i <= da; ++i) {
      Range acc{0, 0};
      for (int j = 0; j <= da; ++j) {
        const Rational& c = w[i][j];
        if (c >= 0) {
          acc.lo += c * ce[j].lo;
          acc.hi += c * ce[j].hi;
        } else {
          acc.lo += c * ce[j].hi;
          acc.hi += c * ce[j].lo;
        }
      }
      if (acc.lo > 0) signs.push_back(1);
      else if (acc.hi < 0) signs.push_back(-1);
      else {
        Polynomial t(a.order());
        for (int j = 0; j <= da; ++j)
          if (w[i][j] != 0) t += cs[j] * w[i][j];
        signs.push_back(to_int(sign(t, n)));
      }
    }
    return count_variations(signs);
  };

  std::vector<Coordinate> found;
  auto rec = [&](auto&& self, const Rational& l, const Rational& hh) -> void {
    int v = variations(l, hh);
    if (v == 0) return;
    if (v == 1) {
      Rational lo = l, hi = hh;
      auto zero = [&](const Rational& x) { return sign(a.substitute(var, x), n) == Sign::Zero; };
      while (zero(lo) || zero(hi)) {
        Rational c = (lo + hi) / 2;
        if (zero(c)) {
          found.push_back(c);
          return;
        }
        if (variations(lo, c) == 1) hi = c;
        else lo = c;
      }
      RealAlgebraicNumber r(Polynomial(a.order()), var, lo, hi);
      r.defining_ = shared;
      found.push_back(std::move(r));
      return;
    }
    Rational m = (l + hh) / 2;
    self(self, l, m);
    if (sign(a.substitute(var, m), n) == Sign::Zero) found.push_back(m);
    self(self, m, hh);
  };
  rec(rec, -B, B);

  for (auto& c : found) {
    unsigned mult = 1;
    if (h > 0) {
      push(c);
      Polynomial der = dp;
      while (sign(der) == Sign::Zero) {
        ++mult;
        der = der.derivative(var);
      }
      pop();
    }
    out.push_back({std::move(c), mult});
  }
  return out;
}

int PointContext::compare_rational(RealAlgebraicNumber& a, const Rational& r, size_t n) {
  if (a.is_exact()) return cmp(a.exact_value(), r) < 0 ? -1 : cmp(a.exact_value(), r) > 0 ? 1 : 0;
  if (r <= a.iso_.lo) return 1;
  if (r >= a.iso_.hi) return -1;
  Sign s = sign(a.defining().substitute(n, r), n);
  if (s == Sign::Zero) return 0;
  return s == lo_sign(a, n) ? 1 : -1;
}

int PointContext::compare(Coordinate& a, const Rational& r) {
  if (auto q = std::get_if<Rational>(&a)) {
    int c = cmp(*q, r);
    return c < 0 ? -1 : c > 0 ? 1 : 0;
  }
  return compare_rational(std::get<RealAlgebraicNumber>(a), r, size());
}

int PointContext::compare(Coordinate& a, Coordinate& b) {
  size_t n = size();
  for (Coordinate* c : {&a, &b})
    if (auto r = std::get_if<RealAlgebraicNumber>(c); r && r->is_exact()) *c = Rational(r->exact_value());
  if (auto q = std::get_if<Rational>(&b)) return compare(a, Rational(*q));
  if (auto q = std::get_if<Rational>(&a)) return -compare(b, Rational(*q));
  bool tested = false, equal_candidate = false;
  while (true) {
    if (is_rational(a) || is_rational(b)) return compare(a, b);
    auto& ra = std::get<RealAlgebraicNumber>(a);
    auto& rb = std::get<RealAlgebraicNumber>(b);
    if (ra.iso_.hi <= rb.iso_.lo) return -1;
    if (rb.iso_.hi <= ra.iso_.lo) return 1;
    if (!tested) {
      tested = true;
      if (ra.defining_ == rb.defining_) {
        // Distinct isolating intervals of the same polynomial that overlap
        // can only be the same root once both are refined.
        equal_candidate = true;
      } else {
        push(a);
        equal_candidate = sign(rb.defining()) == Sign::Zero;
        pop();
      }
    }
    if (equal_candidate) {
      if (rb.iso_.lo <= ra.iso_.lo && ra.iso_.hi <= rb.iso_.hi) return 0;
      bisect_over(a, n);
    } else {
      bisect_over(a, n);
      bisect_over(b, n);
    }
  }
}

void PointContext::bisect(Coordinate& c) { bisect_over(c, size()); }

void PointContext::refine(Coordinate& c, const Rational& width) {
  while (auto r = std::get_if<RealAlgebraicNumber>(&c)) {
    if (r->is_exact()) {
      c = Rational(r->exact_value());
      return;
    }
    if (r->iso_.hi - r->iso_.lo < width) return;
    bisect_over(c, size());
  }
}

Rational PointContext::approximate(size_t i, const Rational& width) {
  while (auto r = std::get_if<RealAlgebraicNumber>(&slots_[i].c)) {
    if (r->iso_.hi - r->iso_.lo < width) return (r->iso_.lo + r->iso_.hi) / 2;
    bisect_slot(i);
  }
  return std::get<Rational>(slots_[i].c);
}

Integer PointContext::floor_scaled(Coordinate& c, const Integer& scale) {
  auto fl = [](const Rational& q) {
    Integer k;
    mpz_fdiv_q(k.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return k;
  };
  if (auto q = std::get_if<Rational>(&c)) return fl(*q * scale);
  auto& r = std::get<RealAlgebraicNumber>(c);
  if (r.is_exact()) return fl(r.exact_value() * scale);
  Integer lo = fl(r.iso_.lo * scale), hi = fl(r.iso_.hi * scale);
  while (lo < hi) {
    Integer mid = lo + (hi - lo + 1) / 2;
    if (compare_rational(r, make_rational(mid, scale), size()) >= 0) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

Rational PointContext::sample_between(Coordinate* lo, Coordinate* hi) {
  if (!lo && !hi) return 0;
  Integer scale = 1;
  while (true) {
    std::optional<Integer> nmin, nmax;
    if (lo) nmin = floor_scaled(*lo, scale) + 1;
    if (hi) {
      Integer f = floor_scaled(*hi, scale);
      if (compare(*hi, make_rational(f, scale)) == 0) f -= 1;
      nmax = f;
    }
    if (!nmin || !nmax || *nmin <= *nmax) {
      Integer pick;
      if ((!nmin || *nmin <= 0) && (!nmax || *nmax >= 0)) pick = 0;
      else if (nmin && *nmin > 0) pick = *nmin;
      else pick = *nmax;
      return make_rational(pick, scale);
    }
    scale *= 2;
  }
}

namespace {

struct Single {
  OrderPtr order;
  size_t var;
};

Single univariate_of(const Polynomial& p) {
  if (p.is_constant()) throw InvalidArgument("expected a non-constant univariate polynomial");
  size_t v = p.main_var();
  if (!only_var(p, v)) throw InvalidArgument("expected a univariate polynomial: " + p.to_string());
  return {p.order(), v};
}

OrderPtr single_order(const Polynomial& p, size_t var) { return make_order({p.order()->name(var)}); }

Coordinate to_single(const RealAlgebraicNumber& r, const OrderPtr& so) {
  if (r.is_exact()) return r.exact_value();
  return RealAlgebraicNumber(r.defining().reorder(so), 0, r.interval().lo, r.interval().hi);
}

RealAlgebraicNumber from_single(const Coordinate& c, const OrderPtr& order, size_t var) {
  if (auto q = std::get_if<Rational>(&c)) return RealAlgebraicNumber::exact(*q, order, var);
  const auto& r = std::get<RealAlgebraicNumber>(c);
  if (r.is_exact()) return RealAlgebraicNumber::exact(r.exact_value(), order, var);
  return RealAlgebraicNumber(r.defining().reorder(order), var, r.interval().lo, r.interval().hi);
}

void check_univariate_number(const RealAlgebraicNumber& r) {
  if (r.is_exact()) return;
  if (!only_var(r.defining(), r.var()))
    throw InvalidArgument("algebraic number is not defined by a univariate polynomial");
}

}  // namespace

std::vector<RealAlgebraicNumber> isolate_roots(const Polynomial& p) {
  auto [order, v] = univariate_of(p);
  if (gcd(p, p.derivative(v)).degree(v) > 0) throw InvalidArgument("polynomial is not square-free: " + p.to_string());
  auto so = single_order(p, v);
  PointContext ctx;
  std::vector<RealAlgebraicNumber> out;
  for (auto& r : ctx.roots(p.reorder(so))) out.push_back(from_single(r.value, order, v));
  return out;
}

RealAlgebraicNumber refine(const RealAlgebraicNumber& r, const Rational& width) {
  if (r.is_exact()) return r;
  check_univariate_number(r);
  auto so = single_order(r.defining(), r.var());
  PointContext ctx;
  Coordinate c = to_single(r, so);
  ctx.refine(c, width);
  return from_single(c, r.defining().order(), r.var());
}

int compare(const RealAlgebraicNumber& a, const RealAlgebraicNumber& b) {
  check_univariate_number(a);
  check_univariate_number(b);
  const RealAlgebraicNumber& ref = a.is_exact() ? b : a;
  auto so = make_order({ref.defining().order()->name(ref.var())});
  PointContext ctx;
  Coordinate ca = to_single(a, so), cb = to_single(b, so);
  return ctx.compare(ca, cb);
}

Sign sign_at(const Polynomial& p, const RealAlgebraicNumber& r) {
  check_univariate_number(r);
  if (r.is_exact()) return sign_of(p.substitute(r.var(), r.exact_value()).constant_value());
  if (!only_var(p, r.var())) throw InvalidArgument("polynomial and number use different variables");
  auto so = single_order(r.defining(), r.var());
  PointContext ctx;
  ctx.push(to_single(r, so));
  return ctx.sign(p.reorder(so));
}

Rational choose_sample(const std::optional<RealAlgebraicNumber>& lo, const std::optional<RealAlgebraicNumber>& hi) {
  OrderPtr so = make_order({"x"});
  std::optional<Coordinate> l, h;
  if (lo) {
    check_univariate_number(*lo);
    so = make_order({lo->defining().order()->name(lo->var())});
    l = to_single(*lo, so);
  }
  if (hi) {
    check_univariate_number(*hi);
    if (!lo) so = make_order({hi->defining().order()->name(hi->var())});
    h = to_single(*hi, so);
  }
  PointContext ctx;
  if (l && h && ctx.compare(*l, *h) >= 0) throw InvalidArgument("empty sample region");
  return ctx.sample_between(l ? &*l : nullptr, h ? &*h : nullptr);
}

std::vector<Sign> thom_encoding(const Polynomial& p, const RealAlgebraicNumber& r) {
  auto [order, v] = univariate_of(p);
  std::vector<Sign> out;
  Polynomial d = p.derivative(v);
  while (!d.is_zero()) {
    out.push_back(sign_at(d, r));
    d = d.derivative(v);
  }
  return out;
}

Sign sign_at(const Polynomial& p, const SamplePoint& s) {
  PointContext ctx(s);
  return ctx.sign(p);
}

std::vector<std::string> approximate(const SamplePoint& s, int digits) {
  PointContext ctx(s);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Rational width(1, scale * 4);
  std::vector<std::string> out;
  for (size_t i = 0; i < s.size(); ++i) out.push_back(decimal(ctx.approximate(i, width), digits));
  return out;
}

}  // namespace cadkit
