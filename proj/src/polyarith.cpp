#include "cadkit/polyarith.hpp"

#include <algorithm>

namespace cadkit {

namespace {

using Coeffs = std::vector<Polynomial>;

void trim(Coeffs& c) {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

int deg(const Coeffs& c) { return static_cast<int>(c.size()) - 1; }

Coeffs coeffs_of(const Polynomial& p, size_t var) {
  if (p.is_zero()) return {};
  return p.coefficients(var);
}

Polynomial one(const OrderPtr& o) { return Polynomial(o, Rational(1)); }

// lc(b)^(deg a - deg b + 1) * a mod b.
Coeffs prem_coeffs(Coeffs a, const Coeffs& b) {
  int db = deg(b);
  int count = deg(a) - db + 1;
  if (count <= 0) return a;
  const Polynomial& lb = b.back();
  int steps = 0;
  while (!a.empty() && deg(a) >= db) {
    Polynomial lr = a.back();
    int s = deg(a) - db;
    for (auto& c : a) c *= lb;
    for (int i = 0; i <= db; ++i) a[s + i] -= lr * b[i];
    a.pop_back();
    trim(a);
    ++steps;
  }
  if (steps < count) {
    Polynomial f = lb.pow(count - steps);
    for (auto& c : a) c *= f;
  }
  return a;
}

Coeffs divide_coeffs(const Coeffs& a, const Polynomial& d) {
  Coeffs out;
  out.reserve(a.size());
  for (const auto& c : a) out.push_back(c.divide_exact(d));
  return out;
}

// Subresultant PRS gcd of two polynomials (coefficient vectors, deg a >= deg b >= 1).
Coeffs prs_gcd(Coeffs a, Coeffs b, const OrderPtr& order) {
  Polynomial g = one(order), h = one(order);
  while (true) {
    int delta = deg(a) - deg(b);
    Coeffs r = prem_coeffs(a, b);
    if (r.empty()) return b;
    if (deg(r) == 0) return {one(order)};
    a = std::move(b);
    b = divide_coeffs(r, g * h.pow(delta));
    g = a.back();
    if (delta > 0) h = g.pow(delta).divide_exact(h.pow(delta - 1));
  }
}

Polynomial content_of(const Coeffs& c) {
  Polynomial g(c.front().order());
  for (const auto& x : c) {
    g = gcd(g, x);
    if (g.is_constant() && !g.is_zero()) break;
  }
  return g;
}

}  // namespace

Polynomial arith(const Polynomial& a, const Polynomial& b, ArithOp op) {
  switch (op) {
    case ArithOp::Add:
      return a + b;
    case ArithOp::Sub:
      return a - b;
    case ArithOp::Mul:
      return a * b;
  }
  throw InternalError("bad arithmetic op");
}

PseudoDivision pseudo_divide(const Polynomial& a, const Polynomial& b, size_t var) {
  if (b.is_zero()) throw InvalidArgument("pseudo-division by zero");
  int db = b.degree(var);
  Polynomial lb = b.leading_coefficient(var);
  int count = std::max(a.degree(var) - db + 1, 0);
  Polynomial q(a.order()), r = a;
  int steps = 0;
  while (!r.is_zero() && r.degree(var) >= db) {
    int s = r.degree(var) - db;
    Polynomial t = r.leading_coefficient(var).shift(var, s);
    q = q * lb + t;
    r = r * lb - t * b;
    ++steps;
  }
  if (steps < count) {
    Polynomial f = lb.pow(count - steps);
    q *= f;
    r *= f;
  }
  return {std::move(q), std::move(r), static_cast<unsigned>(count)};
}

Polynomial prem(const Polynomial& a, const Polynomial& b, size_t var) {
  if (b.is_zero()) throw InvalidArgument("pseudo-remainder by zero");
  Coeffs r = prem_coeffs(coeffs_of(a, var), coeffs_of(b, var));
  if (r.empty()) return Polynomial(a.order());
  return Polynomial::from_coefficients(r, var);
}

Polynomial resultant(const Polynomial& p, const Polynomial& q, size_t var) {
  if (p.degree(var) < 1 || q.degree(var) < 1)
    throw InvalidArgument("resultant needs positive degree in " + p.order()->name(var));
  const OrderPtr& order = p.order();
  Coeffs a = coeffs_of(p, var), b = coeffs_of(q, var);
  int s = 1;
  if (deg(a) < deg(b)) {
    std::swap(a, b);
    if ((deg(a) & 1) && (deg(b) & 1)) s = -s;
  }
  Polynomial g = one(order), h = one(order);
  while (true) {
    int da = deg(a), db = deg(b), delta = da - db;
    if ((da & 1) && (db & 1)) s = -s;
    Coeffs r = prem_coeffs(a, b);
    if (r.empty()) return Polynomial(order);
    a = std::move(b);
    b = divide_coeffs(r, g * h.pow(delta));
    g = a.back();
    if (delta > 0) h = g.pow(delta).divide_exact(h.pow(delta - 1));
    if (deg(b) == 0) {
      int n = deg(a);
      Polynomial res = b[0].pow(n).divide_exact(h.pow(n - 1));
      return s < 0 ? -res : res;
    }
  }
}

Polynomial discriminant(const Polynomial& p, size_t var) {
  int d = p.degree(var);
  if (d < 2) throw InvalidArgument("discriminant needs degree >= 2 in " + p.order()->name(var));
  Polynomial r = resultant(p, p.derivative(var), var).divide_exact(p.leading_coefficient(var));
  return ((d * (d - 1) / 2) % 2) ? -r : r;
}

Polynomial determinant(std::vector<std::vector<Polynomial>> m, const OrderPtr& order) {
  size_t n = m.size();
  if (n == 0) return one(order);
  bool neg = false;
  Polynomial prev = one(order);
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      size_t i = k + 1;
      while (i < n && m[i][k].is_zero()) ++i;
      if (i == n) return Polynomial(order);
      std::swap(m[i], m[k]);
      neg = !neg;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        Polynomial v = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        m[i][j] = v.divide_exact(prev);
      }
    }
    prev = m[k][k];
  }
  return neg ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

namespace {

// Rows x^(n-j-1) p .. p, x^(m-j-1) q .. q as coefficient rows indexed by power.
std::vector<std::vector<Polynomial>> subresultant_rows(const Coeffs& a, const Coeffs& b, int j,
                                                       const OrderPtr& order) {
  int m = deg(a), n = deg(b);
  int width = m + n - j;
  std::vector<std::vector<Polynomial>> rows;
  auto add = [&](const Coeffs& c, int shifts) {
    for (int i = shifts - 1; i >= 0; --i) {
      std::vector<Polynomial> row(width, Polynomial(order));
      for (int k = 0; k < static_cast<int>(c.size()); ++k) row[k + i] = c[k];
      rows.push_back(std::move(row));
    }
  };
  add(a, n - j);
  add(b, m - j);
  return rows;
}

}  // namespace

Polynomial subresultant(const Polynomial& p, const Polynomial& q, size_t var, int j) {
  Coeffs a = coeffs_of(p, var), b = coeffs_of(q, var);
  int m = deg(a), n = deg(b);
  if (n < 1 || m < n) throw InvalidArgument("subresultant needs deg p >= deg q >= 1");
  if (j < 0 || j > n) throw InvalidArgument("subresultant index out of range");
  if (j == n) return q;
  const OrderPtr& order = p.order();
  auto rows = subresultant_rows(a, b, j, order);
  int size = m + n - 2 * j;
  std::vector<std::vector<Polynomial>> mat(size, std::vector<Polynomial>(size, Polynomial(order)));
  for (int r = 0; r < size; ++r) {
    // Columns for powers m+n-j-1 .. j+1, then the whole row polynomial.
    for (int c = 0; c + 1 < size; ++c) mat[r][c] = rows[r][m + n - j - 1 - c];
    Coeffs full(rows[r].begin(), rows[r].end());
    trim(full);
    mat[r][size - 1] = full.empty() ? Polynomial(order) : Polynomial::from_coefficients(full, var);
  }
  return determinant(std::move(mat), order);
}

Polynomial principal_subresultant_coefficient(const Polynomial& p, const Polynomial& q, size_t var, int j) {
  Coeffs a = coeffs_of(p, var), b = coeffs_of(q, var);
  int m = deg(a), n = deg(b);
  if (m < 1 || n < 1) throw InvalidArgument("psc needs positive degrees");
  if (j < 0 || j >= std::min(m, n)) throw InvalidArgument("psc index out of range");
  if (j == 0) return resultant(p, q, var);
  const OrderPtr& order = p.order();
  auto rows = subresultant_rows(a, b, j, order);
  int size = m + n - 2 * j;
  std::vector<std::vector<Polynomial>> mat(size, std::vector<Polynomial>(size, Polynomial(order)));
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) mat[r][c] = rows[r][m + n - j - 1 - c];
  return determinant(std::move(mat), order);
}

Polynomial content(const Polynomial& p, size_t var) {
  if (p.is_zero()) return p;
  if (p.degree(var) == 0) return p.normalized();
  return content_of(p.coefficients(var)).normalized();
}

Polynomial primitive_part(const Polynomial& p, size_t var) {
  if (p.is_zero()) return p;
  return p.divide_exact(content(p, var)).normalized();
}

Polynomial gcd(const Polynomial& p, const Polynomial& q) {
  if (p.is_zero()) return q.normalized();
  if (q.is_zero()) return p.normalized();
  const OrderPtr& order = p.order();
  if (p.is_constant() || q.is_constant()) return one(order);
  size_t v = std::max(p.level(), q.level()) - 1;
  int dp = p.degree(v), dq = q.degree(v);
  if (dp == 0) return gcd(p, content(q, v));
  if (dq == 0) return gcd(content(p, v), q);
  Polynomial cp = content(p, v), cq = content(q, v);
  Polynomial c = gcd(cp, cq);
  Coeffs a = coeffs_of(p.divide_exact(cp), v), b = coeffs_of(q.divide_exact(cq), v);
  if (deg(a) < deg(b)) std::swap(a, b);
  Coeffs g = prs_gcd(std::move(a), std::move(b), order);
  Polynomial gp = primitive_part(Polynomial::from_coefficients(g, v), v);
  return (c * gp).normalized();
}

Polynomial squarefree_part(const Polynomial& p, size_t var) {
  if (p.degree(var) <= 0) return p.normalized();
  Polynomial g = gcd(p, p.derivative(var));
  return p.divide_exact(g).normalized();
}

bool canonical_less(const Polynomial& a, const Polynomial& b) {
  size_t la = a.level(), lb = b.level();
  if (la != lb) return la < lb;
  if (la > 0) {
    int da = a.degree(la - 1), db = b.degree(lb - 1);
    if (da != db) return da < db;
  }
  int ta = a.total_degree(), tb = b.total_degree();
  if (ta != tb) return ta < tb;
  return a.to_string() < b.to_string();
}

std::vector<BasisElement> squarefree_basis_with_sources(const std::vector<Polynomial>& polys, size_t var) {
  std::vector<BasisElement> basis;
  auto merge_sources = [](std::vector<size_t> a, const std::vector<size_t>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
  };
  for (size_t i = 0; i < polys.size(); ++i) {
    if (polys[i].degree(var) <= 0) continue;
    std::vector<BasisElement> queue;
    queue.push_back({squarefree_part(primitive_part(polys[i], var), var), {i}});
    while (!queue.empty()) {
      BasisElement f = std::move(queue.back());
      queue.pop_back();
      if (f.poly.degree(var) <= 0) continue;
      bool split = false;
      for (size_t k = 0; k < basis.size(); ++k) {
        Polynomial g = gcd(f.poly, basis[k].poly);
        if (g.degree(var) <= 0) continue;
        BasisElement b = std::move(basis[k]);
        basis.erase(basis.begin() + static_cast<long>(k));
        queue.push_back({f.poly.divide_exact(g).normalized(), f.sources});
        queue.push_back({b.poly.divide_exact(g).normalized(), b.sources});
        queue.push_back({g, merge_sources(f.sources, b.sources)});
        split = true;
        break;
      }
      if (!split) basis.push_back(std::move(f));
    }
  }
  std::sort(basis.begin(), basis.end(),
            [](const BasisElement& a, const BasisElement& b) { return canonical_less(a.poly, b.poly); });
  return basis;
}

std::vector<Polynomial> squarefree_basis(const std::vector<Polynomial>& polys, size_t var) {
  std::vector<Polynomial> out;
  for (auto& e : squarefree_basis_with_sources(polys, var)) out.push_back(std::move(e.poly));
  return out;
}

}  // namespace cadkit
