#include "cadkit/ccd.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <functional>
#include <map>
#include <random>

#include "cadkit/error.hpp"
#include "cadkit/polyarith.hpp"

namespace cadkit {

namespace {

struct RawNode {
  CCDNode::Kind kind = CCDNode::Kind::Root;
  std::optional<Polynomial> poly;
  std::vector<RawNode> children;
};

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  size_t pos() const { return pos_; }

  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_[pos_] == ';') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  std::string word() {
    skip();
    size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) throw ParseError("expected a name", pos_);
    return std::string(s_.substr(start, pos_ - start));
  }

  // Text up to the ')' closing the current list, which is left unread.
  std::pair<std::string_view, size_t> raw() {
    skip();
    size_t start = pos_;
    int depth = 0;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '(') ++depth;
      if (c == ')') {
        if (depth == 0) break;
        --depth;
      }
      ++pos_;
    }
    if (pos_ == s_.size()) throw ParseError("unterminated list", start);
    return {s_.substr(start, pos_ - start), start};
  }

  bool at_end() {
    skip();
    return pos_ == s_.size();
  }

 private:
  std::string_view s_;
  size_t pos_ = 0;
};

Polynomial read_poly(Reader& r, const OrderPtr& order) {
  auto [text, start] = r.raw();
  try {
    return parse_polynomial(text, order);
  } catch (const ParseError& e) {
    throw ParseError("bad polynomial '" + std::string(text) + "'", start + e.position());
  }
}

RawNode read_node(Reader& r, const OrderPtr& order) {
  RawNode node;
  r.expect('(');
  size_t at = r.pos();
  if (r.word() != "node") throw ParseError("expected 'node'", at);
  r.expect('(');
  at = r.pos();
  std::string kind = r.word();
  if (kind == "eq") {
    node.kind = CCDNode::Kind::Equation;
    node.poly = read_poly(r, order);
    if (node.poly->is_constant()) throw ParseError("equation must involve a variable", at);
  } else if (kind == "neq") {
    node.kind = CCDNode::Kind::Complement;
  } else if (kind == "any") {
    node.kind = CCDNode::Kind::Whole;
  } else {
    throw ParseError("expected eq, neq or any", at);
  }
  r.expect(')');
  while (!r.peek(')')) node.children.push_back(read_node(r, order));
  r.expect(')');
  return node;
}

CCDNode whole(size_t level) {
  CCDNode w;
  w.kind = CCDNode::Kind::Whole;
  w.level = level;
  w.implicit = true;
  return w;
}

// Hangs `children` (all at level `at`) below `node` (level `from`) through
// implicit WholeSpace nodes.
void hang(CCDNode& node, std::vector<CCDNode> children) {
  if (children.empty()) return;
  size_t at = children.front().level;
  CCDNode* cur = &node;
  for (size_t l = node.level + 1; l < at; ++l) {
    cur->children.push_back(whole(l));
    cur = &cur->children.back();
  }
  cur->children = std::move(children);
}

void pad(CCDNode& node, size_t n) {
  if (node.children.empty() && node.level < n) node.children.push_back(whole(node.level + 1));
  for (auto& c : node.children) pad(c, n);
}

CCDNode build(const RawNode& raw, size_t level, size_t n) {
  CCDNode node;
  node.kind = raw.kind;
  node.poly = raw.poly;
  node.level = level;
  if (raw.children.empty()) return node;
  size_t at = level + 1;
  for (const auto& c : raw.children) {
    if (c.kind != CCDNode::Kind::Equation) continue;
    if (c.poly->main_var() < level)
      throw InvalidArgument("equation " + c.poly->to_string() + " has main variable " +
                            c.poly->order()->name(c.poly->main_var()) + " but is placed below level " +
                            std::to_string(level));
    at = std::max(at, c.poly->main_var() + 1);
  }
  if (at > n) throw InvalidArgument("children below level " + std::to_string(level) + " exceed the order");
  std::vector<CCDNode> kids;
  for (const auto& c : raw.children) kids.push_back(build(c, at, n));
  hang(node, std::move(kids));
  return node;
}

std::string complement_label(const CCDNode& parent) {
  std::vector<std::string> eqs;
  for (const auto& c : parent.children)
    if (c.kind == CCDNode::Kind::Equation) eqs.push_back(c.poly->to_string());
  if (eqs.size() == 1) return eqs[0] + " != 0";
  std::string s;
  for (size_t i = 0; i < eqs.size(); ++i) s += (i ? "*(" : "(") + eqs[i] + ")";
  return s + " != 0";
}

using Chain = std::vector<std::pair<const CCDNode*, const CCDNode*>>;

std::string path_of(const Chain& chain) {
  std::string s;
  for (const auto& [p, c] : chain) {
    if (c->implicit) continue;
    if (!s.empty()) s += " / ";
    s += node_label(*p, *c);
  }
  return s.empty() ? "root" : s;
}

void check_node(const CCDNode& node, size_t n, Chain& chain) {
  auto fail = [&](const std::string& msg) { throw InvalidArgument(msg + " below " + path_of(chain)); };
  if (node.children.empty()) {
    if (node.level != n) fail("leaf at level " + std::to_string(node.level) + " of " + std::to_string(n));
    return;
  }
  size_t wholes = 0, comps = 0;
  std::vector<const Polynomial*> eqs;
  for (const auto& c : node.children) {
    if (c.level != node.level + 1) fail("child at level " + std::to_string(c.level) + " under level " + std::to_string(node.level));
    switch (c.kind) {
      case CCDNode::Kind::Whole: ++wholes; break;
      case CCDNode::Kind::Complement: ++comps; break;
      case CCDNode::Kind::Equation: eqs.push_back(&*c.poly); break;
      case CCDNode::Kind::Root: fail("nested root node");
    }
  }
  if (wholes > 0 && node.children.size() != 1) fail("a whole-space child must be the only child");
  if (wholes == 0 && (eqs.empty() || comps != 1)) fail("children must be equations plus exactly one complement");
  size_t v = node.level;
  for (size_t i = 0; i < eqs.size(); ++i) {
    const Polynomial& p = *eqs[i];
    if (p.is_constant() || p.main_var() != v)
      fail("equation " + p.to_string() + " does not have main variable " + p.order()->name(v));
    if (gcd(p, p.derivative(v)).degree(v) > 0) fail(p.to_string() + " is not square-free");
    for (size_t j = 0; j < i; ++j)
      if (gcd(p, *eqs[j]).degree(v) > 0) fail(p.to_string() + " and " + eqs[j]->to_string() + " are not coprime");
  }
  for (const auto& c : node.children) {
    chain.push_back({&node, &c});
    check_node(c, n, chain);
    chain.pop_back();
  }
}

size_t leaves(const CCDNode& n) {
  if (n.children.empty()) return 1;
  size_t s = 0;
  for (const auto& c : n.children) s += leaves(c);
  return s;
}

std::string point_text(const std::vector<Rational>& a) {
  std::string s = "(";
  for (size_t i = 0; i < a.size(); ++i) s += (i ? ", " : "") + to_string(a[i]);
  return s + ")";
}

class ProbeSearch {
 public:
  ProbeSearch(const OrderPtr& order, unsigned seed) : order_(order), rng_(seed) {}

  std::optional<std::vector<Rational>> find(const Chain& chain, int attempt) {
    std::vector<Rational> a;
    for (size_t i = 0; i < chain.size(); ++i) {
      const auto& [par, ch] = chain[i];
      switch (ch->kind) {
        case CCDNode::Kind::Root:
        case CCDNode::Kind::Whole: a.push_back(grid(attempt)); break;
        case CCDNode::Kind::Equation: {
          Polynomial u = ch->poly->substitute_prefix(a);
          if (u.is_zero()) {
            a.push_back(grid(attempt));
            break;
          }
          if (u.is_constant()) return std::nullopt;
          std::vector<Rational> rational;
          for (const auto& r : isolate_roots(squarefree_part(u, i)))
            if (r.is_exact()) rational.push_back(r.exact_value());
          if (rational.empty()) return std::nullopt;
          a.push_back(rational[rng_() % rational.size()]);
          break;
        }
        case CCDNode::Kind::Complement: {
          bool found = false;
          for (int t = 0; t < 8 && !found; ++t) {
            a.push_back(grid(attempt));
            found = std::none_of(par->children.begin(), par->children.end(), [&](const CCDNode& s) {
              return s.kind == CCDNode::Kind::Equation && s.poly->substitute_prefix(a).is_zero();
            });
            if (!found) a.pop_back();
          }
          if (!found) return std::nullopt;
          break;
        }
      }
    }
    return a;
  }

 private:
  // Dyadic grid whose radius grows with the attempt number.
  Rational grid(int attempt) {
    long radius = 1L << std::min(attempt / 10 + 1, 20);
    long den = 1L << (attempt % 3);
    std::uniform_int_distribution<long> pick(-radius * den, radius * den);
    return make_rational(pick(rng_), den);
  }

  OrderPtr order_;
  std::mt19937 rng_;
};

void separation_at(const CCDNode& node, const std::vector<Rational>& a, const std::string& where,
                   std::vector<std::string>& out) {
  size_t v = node.level;
  std::vector<std::pair<const Polynomial*, Polynomial>> inst;
  for (const auto& c : node.children) {
    if (c.kind != CCDNode::Kind::Equation) continue;
    Polynomial u = c.poly->substitute_prefix(a);
    if (u.degree(v) < c.poly->degree(v))
      out.push_back("leading coefficient of " + c.poly->to_string() + " vanishes at " + point_text(a) + " below " + where);
    else if (gcd(u, u.derivative(v)).degree(v) > 0)
      out.push_back(c.poly->to_string() + " is not square-free at " + point_text(a) + " below " + where);
    inst.push_back({&*c.poly, std::move(u)});
  }
  for (size_t i = 0; i < inst.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      if (!inst[i].second.is_zero() && !inst[j].second.is_zero() &&
          gcd(inst[i].second, inst[j].second).degree(v) > 0)
        out.push_back(inst[i].first->to_string() + " and " + inst[j].first->to_string() + " share a root at " +
                      point_text(a) + " below " + where);
}

void collect_paths(const CCDNode& node, Chain& chain, std::map<const CCDNode*, std::string>& paths) {
  paths[&node] = path_of(chain);
  for (const auto& c : node.children) {
    chain.push_back({&node, &c});
    collect_paths(c, chain, paths);
    chain.pop_back();
  }
}

}  // namespace

size_t CCDTree::leaf_count() const { return leaves(root); }

std::string node_label(const CCDNode& parent, const CCDNode& child) {
  switch (child.kind) {
    case CCDNode::Kind::Equation: return child.poly->to_string() + " = 0";
    case CCDNode::Kind::Complement: return complement_label(parent);
    case CCDNode::Kind::Whole: return "*";
    case CCDNode::Kind::Root: return "root";
  }
  return "";
}

void check_tree(const CCDTree& tree) {
  if (!tree.order || tree.order->size() == 0) throw InvalidArgument("tree needs a variable order");
  if (tree.root.kind != CCDNode::Kind::Root || tree.root.level != 0) throw InvalidArgument("tree must start at a root node");
  Chain chain;
  check_node(tree.root, tree.order->size(), chain);
}

CCDTree parse_tree(std::string_view text) {
  Reader r(text);
  CCDTree tree;
  r.expect('(');
  size_t at = r.pos();
  if (r.word() != "ccd") throw ParseError("expected 'ccd'", at);
  std::optional<RawNode> root;
  while (!r.peek(')')) {
    r.expect('(');
    at = r.pos();
    std::string key = r.word();
    if (key == "order") {
      std::vector<std::string> names;
      while (!r.peek(')')) names.push_back(r.word());
      if (names.empty()) throw ParseError("empty order", at);
      tree.order = make_order(std::move(names));
    } else if (key == "track" || key == "root") {
      if (!tree.order) throw ParseError("the order must come first", at);
      if (key == "track") {
        tree.tracked.push_back(read_poly(r, tree.order));
      } else {
        if (root) throw ParseError("second root", at);
        root.emplace();
        while (!r.peek(')')) root->children.push_back(read_node(r, tree.order));
      }
    } else {
      throw ParseError("unknown entry '" + key + "'", at);
    }
    r.expect(')');
  }
  r.expect(')');
  if (!r.at_end()) throw ParseError("trailing text", r.pos());
  if (!tree.order) throw ParseError("missing order", 0);
  if (!root) throw ParseError("missing root", 0);
  size_t n = tree.order->size();
  tree.root = build(*root, 0, n);
  pad(tree.root, n);
  check_tree(tree);
  return tree;
}

SeparationReport validate_separation(const CCDTree& tree, int probes_per_cell, unsigned seed, int attempts) {
  SeparationReport rep;
  ProbeSearch search(tree.order, seed);
  Chain chain;
  std::function<void(const CCDNode&)> visit = [&](const CCDNode& node) {
    bool has_eq = std::any_of(node.children.begin(), node.children.end(),
                              [](const CCDNode& c) { return c.kind == CCDNode::Kind::Equation; });
    if (has_eq) {
      ++rep.nodes_checked;
      std::string where = path_of(chain);
      int found = 0;
      for (int t = 0; t < attempts && found < probes_per_cell; ++t) {
        auto a = search.find(chain, t);
        if (!a) continue;
        ++found;
        ++rep.probes;
        std::vector<std::string> v;
        separation_at(node, *a, where, v);
        if (!v.empty()) {
          for (auto& m : v) rep.violations.push_back(std::move(m));
          break;
        }
      }
      if (found == 0) rep.search_failures.push_back(where);
    }
    for (const auto& c : node.children) {
      chain.push_back({&node, &c});
      visit(c);
      chain.pop_back();
    }
  };
  visit(tree.root);
  rep.ok = rep.violations.empty();
  return rep;
}

Realization make_semialgebraic(const CCDTree& tree, unsigned jobs) {
  check_tree(tree);
  size_t n = tree.order->size();
  Realization out;
  CAD& cad = out.cad;
  cad.order = tree.order;
  for (const auto& p : tree.tracked) cad.register_tracked(p);

  std::map<const CCDNode*, size_t> bound_of;
  std::map<const CCDNode*, std::string> paths;
  Chain chain;
  collect_paths(tree.root, chain, paths);
  std::function<void(const CCDNode&)> reg = [&](const CCDNode& node) {
    if (node.kind == CCDNode::Kind::Equation) bound_of[&node] = cad.register_bound(*node.poly);
    for (const auto& c : node.children) reg(c);
  };
  reg(tree.root);

  std::vector<Cell> base{root_cell(cad.tracked.size())};
  for (size_t i = 0; i < cad.tracked.size(); ++i)
    if (cad.tracked[i].is_constant()) base[0].signs[i] = sign_of(cad.tracked[i].constant_value());
  std::vector<const CCDNode*> base_nodes{&tree.root};

  auto t0 = std::chrono::steady_clock::now();
  for (size_t k = 0; k < n; ++k) {
    LiftPlan plan;
    plan.splitting = [&](const Cell& c, size_t pos) {
      const CCDNode* node = base_nodes[pos];
      std::vector<size_t> ids;
      for (const auto& ch : node->children) {
        if (ch.kind != CCDNode::Kind::Equation) continue;
        if (sign_at(ch.poly->leading_coefficient(k), c.sample) == Sign::Zero)
          throw SeparationError("leading coefficient of " + ch.poly->to_string() + " vanishes at the sample of cell " +
                                    index_to_string(c.index),
                                paths.at(node));
        ids.push_back(bound_of.at(&ch));
      }
      return ids;
    };
    std::vector<Cell> cells = lift(cad, base, plan, k == 0 ? 1 : jobs);
    std::vector<const CCDNode*> nodes;
    for (const auto& c : cells) {
      const CCDNode* par = base_nodes[c.parent < 0 ? 0 : c.parent];
      const CCDNode* pick = nullptr;
      for (const auto& ch : par->children) {
        bool match = false;
        switch (ch.kind) {
          case CCDNode::Kind::Whole: match = true; break;
          case CCDNode::Kind::Complement: match = !c.is_section(); break;
          case CCDNode::Kind::Equation:
            match = c.is_section() && std::count(c.section_polys.begin(), c.section_polys.end(), bound_of.at(&ch));
            break;
          case CCDNode::Kind::Root: break;
        }
        if (!match) continue;
        if (pick)
          throw SeparationError(pick->poly->to_string() + " and " + ch.poly->to_string() + " share a real root over cell " +
                                    index_to_string(c.index),
                                paths.at(par));
        pick = &ch;
      }
      if (!pick) throw InternalError("cell " + index_to_string(c.index) + " matches no branch");
      nodes.push_back(pick);
    }
    cad.levels.push_back(std::move(cells));
    out.nodes.push_back(std::move(nodes));
    base = cad.levels.back();
    base_nodes = out.nodes.back();
  }
  cad.stats.lifting_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  cad.notes.push_back("realized from a complex cylindrical decomposition tree with " +
                      std::to_string(tree.leaf_count()) + " leaves");
  return out;
}

}  // namespace cadkit
