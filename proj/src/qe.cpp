#include "cadkit/qe.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>

#include "cadkit/error.hpp"

namespace cadkit {

namespace {

bool eval_cell(const CAD& cad, const Cell& c, const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Atom: {
      auto s = cad.tracked_sign(c, *f->poly);
      if (!s) throw InvalidArgument("polynomial " + f->poly->to_string() + " is not tracked by the CAD");
      return rel_holds(f->rel, to_int(*s));
    }
    case Formula::Kind::RootAtom: throw InvalidArgument("indexed-root atoms cannot be evaluated on cells");
    case Formula::Kind::Not: return !eval_cell(cad, c, f->args[0]);
    case Formula::Kind::Implies: return !eval_cell(cad, c, f->args[0]) || eval_cell(cad, c, f->args[1]);
    case Formula::Kind::And:
      return std::all_of(f->args.begin(), f->args.end(), [&](const FormulaPtr& a) { return eval_cell(cad, c, a); });
    case Formula::Kind::Or:
      return std::any_of(f->args.begin(), f->args.end(), [&](const FormulaPtr& a) { return eval_cell(cad, c, a); });
    case Formula::Kind::Quant: throw InvalidArgument("matrix must be quantifier-free");
  }
  return false;
}

// Cells of level m grouped into stacks by base position (0 for level 1).
std::map<size_t, std::vector<size_t>> stacks(const CAD& cad, size_t m) {
  std::map<size_t, std::vector<size_t>> out;
  const auto& cells = cad.levels[m - 1];
  for (size_t i = 0; i < cells.size(); ++i) out[cells[i].parent < 0 ? 0 : cells[i].parent].push_back(i);
  return out;
}

}  // namespace

std::vector<bool> evaluate_matrix(const CAD& cad, const FormulaPtr& matrix) {
  std::vector<bool> out;
  for (const auto& c : cad.top()) out.push_back(eval_cell(cad, c, matrix));
  return out;
}

std::vector<std::vector<bool>> propagate(const CAD& cad, const PrenexFormula& pf, const std::vector<bool>& top) {
  size_t n = cad.dimension();
  std::vector<std::vector<bool>> out(n + 1);
  out[n] = top;
  for (size_t m = n; m > pf.free_count; --m) {
    bool exists = pf.kind_of(m - 1) == Quantifier::Exists;
    std::vector<bool> base(m == 1 ? 1 : cad.levels[m - 2].size(), !exists);
    for (const auto& [b, idx] : stacks(cad, m)) {
      bool acc = !exists;
      for (size_t i : idx) acc = exists ? (acc || out[m][i]) : (acc && out[m][i]);
      base[b] = acc;
    }
    out[m - 1] = std::move(base);
  }
  return out;
}

FormulaPtr synthesize(const CAD& cad, size_t k, const std::vector<bool>& truths, DescribeMode mode, bool merge) {
  if (k == 0) return truths.at(0) ? make_true() : make_false();
  if (!merge) {
    std::vector<FormulaPtr> terms;
    const auto& cells = cad.levels[k - 1];
    for (size_t i = 0; i < cells.size(); ++i)
      if (truths[i]) terms.push_back(describe_cell(cad, cells[i], mode));
    return make_or(std::move(terms));
  }
  std::vector<std::pair<CellIndex, FormulaPtr>> terms;
  std::vector<bool> cur = truths;
  for (size_t m = k; m >= 1; --m) {
    const auto& cells = cad.levels[m - 1];
    std::vector<bool> full(m == 1 ? 1 : cad.levels[m - 2].size(), false);
    for (const auto& [b, idx] : stacks(cad, m)) {
      if (std::all_of(idx.begin(), idx.end(), [&](size_t i) { return cur[i]; })) {
        full[b] = true;
        continue;
      }
      for (size_t a = 0; a < idx.size();) {
        if (!cur[idx[a]]) {
          ++a;
          continue;
        }
        size_t e = a;
        while (e + 1 < idx.size() && cur[idx[e + 1]]) ++e;
        const Cell& first = cells[idx[a]];
        const Cell& lastc = cells[idx[e]];
        if (a == e) {
          terms.push_back({first.index, describe_cell(cad, first, mode)});
        } else {
          std::vector<FormulaPtr> parts;
          if (m > 1) parts.push_back(describe_cell(cad, cad.levels[m - 2][b], mode));
          size_t v = m - 1;
          const Bound& lo = first.bounds.back();
          const Bound& hi = lastc.bounds.back();
          if (lo.kind == Bound::Kind::Section)
            parts.push_back(root_constraint(cad, first, v, *lo.lower, Rel::GE));
          else if (lo.lower)
            parts.push_back(root_constraint(cad, first, v, *lo.lower, Rel::GT));
          if (hi.kind == Bound::Kind::Section)
            parts.push_back(root_constraint(cad, lastc, v, *hi.lower, Rel::LE));
          else if (hi.upper)
            parts.push_back(root_constraint(cad, lastc, v, *hi.upper, Rel::LT));
          terms.push_back({first.index, make_and(std::move(parts))});
        }
        a = e + 1;
      }
    }
    if (m == 1) {
      if (full[0]) return make_true();
      break;
    }
    cur = std::move(full);
  }
  std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<FormulaPtr> out;
  for (auto& t : terms) out.push_back(std::move(t.second));
  return make_or(std::move(out));
}

std::optional<std::vector<Clause>> clauses_of(const FormulaPtr& matrix) {
  std::vector<FormulaPtr> conjuncts =
      matrix->kind == Formula::Kind::Or ? matrix->args : std::vector<FormulaPtr>{matrix};
  std::vector<Clause> out;
  for (const auto& c : conjuncts) {
    std::vector<FormulaPtr> atoms = c->kind == Formula::Kind::And ? c->args : std::vector<FormulaPtr>{c};
    Clause cl;
    int best = -1;
    for (size_t i = 0; i < atoms.size(); ++i) {
      const auto& a = atoms[i];
      if (a->kind != Formula::Kind::Atom) return std::nullopt;
      if (a->rel == Rel::EQ && !a->poly->is_constant() &&
          (best < 0 || a->poly->level() > atoms[best]->poly->level()))
        best = static_cast<int>(i);
    }
    for (size_t i = 0; i < atoms.size(); ++i) {
      if (static_cast<int>(i) == best)
        cl.equation = *atoms[i]->poly;
      else if (!atoms[i]->poly->is_constant())
        cl.others.push_back(*atoms[i]->poly);
    }
    out.push_back(std::move(cl));
  }
  return out;
}

QEResult qe(const FormulaPtr& f, const OrderPtr& order, const QEConfig& cfg) {
  QEResult res;
  res.order = order;
  res.prenex = prenex(f, order);
  const PrenexFormula& pf = res.prenex;
  size_t n = order->size(), k = pf.free_count;
  std::function<void(const FormulaPtr&)> no_roots = [&](const FormulaPtr& g) {
    if (g->kind == Formula::Kind::RootAtom) throw InvalidArgument("indexed-root atoms are not allowed in qe input");
    for (const auto& a : g->args) no_roots(a);
  };
  no_roots(pf.matrix);

  ProjectionInput input{order, atom_polynomials(pf.matrix), {}};
  CadConfig cc = cfg.cad;
  bool reduced = cc.op == ProjectionOperator::EC || cc.op == ProjectionOperator::TTI;
  if (reduced && k > 0 && k < n && !cfg.allow_reduced_with_free)
    throw InvalidArgument(std::string(operator_name(cc.op)) +
                          " is only used for sentences or quantifier-free input; pass the override to force it");
  if (reduced) {
    auto cl = clauses_of(pf.matrix);
    if (cl) {
      input.clauses = std::move(*cl);
      input.polys.clear();
    } else {
      res.notes.push_back(std::string("matrix is not a disjunction of conjunctions of atoms; ") +
                          operator_name(cc.op) + " replaced by mccallum");
      cc.op = ProjectionOperator::McCallum;
      cc.lifting = LiftingMode::Full;
    }
  }
  CAD cad = build_cad(input, cc);
  for (const auto& note : cad.notes) res.notes.push_back(note);

  auto t0 = std::chrono::steady_clock::now();
  auto top = evaluate_matrix(cad, pf.matrix);
  auto truths = propagate(cad, pf, top);
  res.formula = synthesize(cad, k, truths[k], cfg.language, cfg.merge);
  res.propagation_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  res.true_cells = std::count(truths[k].begin(), truths[k].end(), true);
  // Leading variables that occur nowhere do not make the input open.
  if (free_variables(f).empty()) {
    res.truth = truths[k].at(0);
    res.formula = *res.truth ? make_true() : make_false();
    if (!pf.blocks.empty()) {
      const Block& lead = pf.blocks.front();
      bool want = lead.kind == Quantifier::Exists;
      size_t m = k + lead.vars.size();
      if (*res.truth == want) {
        const auto& cells = cad.levels[m - 1];
        for (size_t i = 0; i < cells.size(); ++i)
          if (truths[m][i] == want) {
            Witness w;
            w.counterexample = !want;
            for (size_t v = k; v < m; ++v) {
              w.names.push_back(order->name(v));
              w.values.push_back(cells[i].sample.coords[v]);
            }
            res.witness = std::move(w);
            break;
          }
      }
    }
  }
  res.cad = std::move(cad);
  return res;
}

Decision decide(const FormulaPtr& sentence, const OrderPtr& order, const CadConfig& cfg) {
  if (!free_variables(sentence).empty()) throw InvalidArgument("decide needs a sentence");
  PrenexFormula pf = prenex(sentence, order);
  size_t n = order->size();
  CAD cad;
  cad.order = order;
  cad.op = cfg.op == ProjectionOperator::Collins ? cfg.op : ProjectionOperator::McCallum;
  cad.projection = project_all({order, atom_polynomials(pf.matrix), {}}, cad.op);
  std::vector<std::vector<size_t>> ids(n);
  for (size_t k = 0; k < n; ++k)
    for (const auto& pp : cad.projection->levels[k]) ids[k].push_back(cad.register_bound(pp.poly));
  for (const auto& p : atom_polynomials(pf.matrix)) cad.register_tracked(p);
  Cell root = root_cell(cad.tracked.size());
  for (size_t i = 0; i < cad.tracked.size(); ++i)
    if (cad.tracked[i].is_constant()) root.signs[i] = sign_of(cad.tracked[i].constant_value());

  Decision d;
  std::function<bool(const Cell&)> dfs = [&](const Cell& base) {
    size_t k = base.level();
    if (k == n) return eval_cell(cad, base, pf.matrix);
    LiftPlan plan;
    plan.splitting = [&](const Cell&, size_t) { return ids[k]; };
    plan.check_nullification = cad.op != ProjectionOperator::Collins;
    std::vector<Cell> stack = lift(cad, {base}, plan, 1);
    d.cells += stack.size();
    // Leading variables that do not occur leave the truth unchanged on every cell.
    bool exists = k < pf.free_count || pf.kind_of(k) == Quantifier::Exists;
    for (const auto& c : stack)
      if (dfs(c) == exists) return exists;
    return !exists;
  };
  d.truth = dfs(root);
  return d;
}

QEResult qe(std::string_view text, OrderPtr order, const QEConfig& cfg) {
  auto parsed = parse_formula(text, std::move(order));
  return qe(parsed.formula, parsed.order, cfg);
}

}  // namespace cadkit
