#include "cadkit/cad.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <thread>

#include "cadkit/error.hpp"

namespace cadkit {

const char* lifting_name(LiftingMode m) { return m == LiftingMode::Full ? "full" : "ec"; }

LiftingMode parse_lifting(std::string_view s) {
  if (s == "full") return LiftingMode::Full;
  if (s == "ec" || s == "ec-reduced") return LiftingMode::ECReduced;
  throw InvalidArgument("unknown lifting mode '" + std::string(s) + "' (expected full or ec)");
}

const char* fallback_name(Fallback f) { return f == Fallback::Abort ? "abort" : "collins"; }

Fallback parse_fallback(std::string_view s) {
  if (s == "abort") return Fallback::Abort;
  if (s == "collins" || s == "restart-with-collins") return Fallback::RestartWithCollins;
  throw InvalidArgument("unknown fallback '" + std::string(s) + "' (expected abort or collins)");
}

std::string index_to_string(const CellIndex& idx) {
  std::string s = "(";
  for (size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
  return s + ")";
}

size_t CAD::full_dimensional_count() const {
  if (levels.empty()) return 0;
  size_t n = 0;
  for (const auto& c : levels.back())
    if (c.dimension == static_cast<int>(levels.size())) ++n;
  return n;
}

size_t CAD::register_bound(const Polynomial& p) {
  Polynomial q = p.normalized();
  for (size_t i = 0; i < bound_polys.size(); ++i)
    if (bound_polys[i] == q) return i;
  bound_polys.push_back(q);
  return bound_polys.size() - 1;
}

size_t CAD::register_tracked(const Polynomial& p) {
  Polynomial q = p.normalized();
  for (size_t i = 0; i < tracked.size(); ++i)
    if (tracked[i].normalized() == q) return i;
  tracked.push_back(p);
  return tracked.size() - 1;
}

std::optional<Sign> CAD::tracked_sign(const Cell& c, const Polynomial& p) const {
  if (p.is_constant()) return sign_of(p.constant_value());
  if (p.level() > c.level()) return std::nullopt;
  Polynomial q = p.normalized();
  for (size_t i = 0; i < tracked.size(); ++i) {
    const Polynomial& t = tracked[i];
    if (t.is_constant() || t.normalized() != q) continue;
    Rational ratio = p.leading_numeric() / t.leading_numeric();
    int s = to_int(c.signs[i]) * (ratio > 0 ? 1 : -1);
    return static_cast<Sign>(s);
  }
  return std::nullopt;
}

Cell root_cell(size_t tracked_count) {
  Cell c;
  c.signs.assign(tracked_count, Sign::Zero);
  return c;
}

bool same_coordinate(const Coordinate& a, const Coordinate& b) {
  auto exact = [](const Coordinate& c) -> std::optional<Rational> {
    if (auto q = std::get_if<Rational>(&c)) return *q;
    const auto& r = std::get<RealAlgebraicNumber>(c);
    if (r.is_exact()) return r.exact_value();
    return std::nullopt;
  };
  auto ea = exact(a), eb = exact(b);
  if (ea && eb) return *ea == *eb;
  if (ea || eb) return false;
  const auto& ra = std::get<RealAlgebraicNumber>(a);
  const auto& rb = std::get<RealAlgebraicNumber>(b);
  if (ra.var() != rb.var()) return false;
  if (ra.defining_ptr() != rb.defining_ptr() && !(ra.defining() == rb.defining())) return false;
  const auto &ia = ra.interval(), &ib = rb.interval();
  return ia.lo < ib.hi && ib.lo < ia.hi;
}

namespace {

struct Entry {
  Coordinate value;
  std::vector<RootRef> owners;
};

struct StackResult {
  std::vector<Cell> cells;
  std::vector<std::string> notes;
};

RootRef pick_owner(const CAD& cad, const std::vector<RootRef>& owners, size_t var) {
  RootRef best = owners.front();
  for (const auto& o : owners) {
    int d = cad.bound_polys[o.poly].degree(var), bd = cad.bound_polys[best.poly].degree(var);
    if (d < bd || (d == bd && o.poly < best.poly)) best = o;
  }
  return best;
}

void record_signs(const CAD& cad, PointContext& ctx, Cell& cell, size_t level) {
  for (size_t i = 0; i < cad.tracked.size(); ++i) {
    const Polynomial& t = cad.tracked[i];
    if (t.level() == level) cell.signs[i] = ctx.sign(t);
  }
}

StackResult lift_one(const CAD& cad, const Cell& base, long base_pos, const LiftPlan& plan) {
  StackResult out;
  size_t var = base.level();
  PointContext ctx(base.sample);
  std::vector<Entry> entries;
  bool tolerated = false;

  for (size_t pid : plan.splitting(base, static_cast<size_t>(base_pos))) {
    const Polynomial& p = cad.bound_polys[pid];
    if (ctx.nullified(p)) {
      if (plan.check_nullification && base.dimension > 0) throw NotWellOriented(base.index, p.to_string());
      if (plan.check_nullification) {
        tolerated = true;
        out.notes.push_back("nullification of " + p.to_string() + " tolerated over 0-dimensional cell " +
                            index_to_string(base.index));
      }
      continue;
    }
    auto roots = ctx.roots(p);
    std::vector<Entry> merged;
    size_t i = 0, j = 0;
    while (i < entries.size() || j < roots.size()) {
      if (j == roots.size()) {
        merged.push_back(std::move(entries[i++]));
        continue;
      }
      RootRef ref{pid, static_cast<int>(j + 1)};
      if (i == entries.size()) {
        merged.push_back({roots[j++].value, {ref}});
        continue;
      }
      int c = ctx.compare(entries[i].value, roots[j].value);
      if (c < 0) {
        merged.push_back(std::move(entries[i++]));
      } else if (c > 0) {
        merged.push_back({roots[j++].value, {ref}});
      } else {
        entries[i].owners.push_back(ref);
        merged.push_back(std::move(entries[i++]));
        ++j;
      }
    }
    entries = std::move(merged);
  }

  size_t r = entries.size();
  for (size_t pos = 0; pos <= 2 * r; ++pos) {
    Cell c;
    c.index = base.index;
    c.index.push_back(static_cast<int>(pos + 1));
    c.parent = base.index.empty() ? -1 : base_pos;
    c.bounds = base.bounds;
    c.signs = base.signs;
    c.tolerated_nullification = tolerated;
    Bound b;
    Coordinate coord;
    if (pos % 2 == 0) {
      size_t k = pos / 2;
      Coordinate* lo = k > 0 ? &entries[k - 1].value : nullptr;
      Coordinate* hi = k < r ? &entries[k].value : nullptr;
      coord = ctx.sample_between(lo, hi);
      if (lo) b.lower = pick_owner(cad, entries[k - 1].owners, var);
      if (hi) b.upper = pick_owner(cad, entries[k].owners, var);
      b.kind = lo && hi ? Bound::Kind::Between : lo ? Bound::Kind::Above : hi ? Bound::Kind::Below : Bound::Kind::Whole;
      c.dimension = base.dimension + 1;
    } else {
      const Entry& e = entries[pos / 2];
      coord = e.value;
      b.kind = Bound::Kind::Section;
      b.lower = pick_owner(cad, e.owners, var);
      for (const auto& o : e.owners) c.section_polys.push_back(o.poly);
      std::sort(c.section_polys.begin(), c.section_polys.end());
      c.dimension = base.dimension;
    }
    c.bounds.push_back(b);
    ctx.push(coord);
    record_signs(cad, ctx, c, var + 1);
    c.sample = ctx.sample();
    ctx.pop();
    out.cells.push_back(std::move(c));
  }
  return out;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<Cell> lift(CAD& cad, const std::vector<Cell>& base, const LiftPlan& plan, unsigned jobs) {
  std::vector<StackResult> results(base.size());
  std::vector<std::exception_ptr> errors(base.size());
  auto work = [&](size_t i) {
    try {
      results[i] = lift_one(cad, base[i], static_cast<long>(i), plan);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, std::max<size_t>(1, base.size()));
  if (jobs <= 1) {
    for (size_t i = 0; i < base.size(); ++i) {
      work(i);
      if (errors[i]) break;
    }
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (size_t i; (i = next.fetch_add(1)) < base.size();) work(i);
      });
    for (auto& t : pool) t.join();
  }
  // The first failing base cell in order decides, so errors are deterministic.
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<Cell> out;
  for (auto& r : results) {
    for (auto& c : r.cells) out.push_back(std::move(c));
    for (auto& n : r.notes) cad.notes.push_back(std::move(n));
  }
  return out;
}

namespace {

CAD build_once(const ProjectionInput& input, const CadConfig& cfg) {
  CAD cad;
  cad.order = input.order;
  cad.op = cfg.op;
  cad.lifting = cfg.lifting;
  size_t n = input.order->size();

  auto t0 = std::chrono::steady_clock::now();
  cad.projection = project_all(input, cfg.op);
  cad.stats.projection_ms = ms_since(t0);
  for (const auto& note : cad.projection->notes) cad.notes.push_back(note);

  std::vector<std::vector<size_t>> all_ids(n), split_ids(n);
  bool reduced = false;
  for (size_t k = 0; k < n; ++k)
    for (const auto& pp : cad.projection->levels[k]) {
      size_t id = cad.register_bound(pp.poly);
      all_ids[k].push_back(id);
      if (pp.splitting || cfg.lifting == LiftingMode::Full)
        split_ids[k].push_back(id);
      else
        reduced = true;
    }
  cad.kind = reduced ? InvarianceKind::TruthTableInvariant : InvarianceKind::SignInvariant;

  for (const auto& p : input.polys) cad.register_tracked(p);
  for (const auto& c : input.clauses) {
    if (c.equation) cad.register_tracked(*c.equation);
    for (const auto& g : c.others) cad.register_tracked(g);
  }
  if (cfg.track_projection)
    for (const auto& p : cad.bound_polys) cad.register_tracked(p);

  std::vector<Cell> base{root_cell(cad.tracked.size())};
  for (size_t i = 0; i < cad.tracked.size(); ++i)
    if (cad.tracked[i].is_constant()) base[0].signs[i] = sign_of(cad.tracked[i].constant_value());

  for (size_t k = 0; k < n; ++k) {
    auto t1 = std::chrono::steady_clock::now();
    LiftPlan plan;
    const auto& ids = split_ids[k];
    plan.splitting = [&ids](const Cell&, size_t) { return ids; };
    plan.check_nullification = cfg.op != ProjectionOperator::Collins;
    cad.levels.push_back(lift(cad, base, plan, k == 0 ? 1 : cfg.jobs));
    (k == 0 ? cad.stats.base_ms : cad.stats.lifting_ms) += ms_since(t1);
    base = cad.levels.back();
  }
  return cad;
}

}  // namespace

CAD build_cad(const ProjectionInput& input, const CadConfig& cfg) {
  if (!input.order || input.order->size() == 0) throw InvalidArgument("a CAD needs at least one variable");
  try {
    return build_once(input, cfg);
  } catch (const NotWellOriented& e) {
    if (cfg.fallback != Fallback::RestartWithCollins || cfg.op == ProjectionOperator::Collins) throw;
    CadConfig c2 = cfg;
    c2.op = ProjectionOperator::Collins;
    c2.lifting = LiftingMode::Full;
    CAD cad = build_once(input, c2);
    cad.notes.insert(cad.notes.begin(), std::string(e.what()) + "; restarted with collins");
    return cad;
  }
}

namespace {

std::string bound_key(const Bound& b) {
  std::string s = std::to_string(static_cast<int>(b.kind));
  auto ref = [](const std::optional<RootRef>& r) {
    return r ? std::to_string(r->poly) + ":" + std::to_string(r->index) : std::string("-");
  };
  return s + "[" + ref(b.lower) + "," + ref(b.upper) + "]";
}

}  // namespace

CheckReport cylindricity_check(const CAD& cad) {
  CheckReport rep;
  for (size_t k = 0; k < cad.levels.size(); ++k) {
    std::map<std::string, std::string> by_index, by_desc;
    for (const auto& c : cad.levels[k]) {
      std::string where = "cell " + index_to_string(c.index);
      if (c.index.size() != k + 1 || c.bounds.size() != k + 1 || c.sample.size() != k + 1) {
        rep.fail(where + ": inconsistent level data");
        continue;
      }
      std::string desc;
      for (const auto& b : c.bounds) desc += bound_key(b) + ";";
      std::string idx = index_to_string(c.index);
      if (!by_index.emplace(idx, desc).second) rep.fail(where + ": duplicate index");
      auto [it, fresh] = by_desc.emplace(desc, idx);
      if (!fresh) rep.fail(where + ": same description as cell " + it->second);
      if (k == 0) continue;
      if (c.parent < 0 || static_cast<size_t>(c.parent) >= cad.levels[k - 1].size()) {
        rep.fail(where + ": missing parent");
        continue;
      }
      const Cell& par = cad.levels[k - 1][c.parent];
      if (!std::equal(par.index.begin(), par.index.end(), c.index.begin())) rep.fail(where + ": index does not extend parent");
      if (!std::equal(par.bounds.begin(), par.bounds.end(), c.bounds.begin()))
        rep.fail(where + ": description does not extend parent");
      for (size_t i = 0; i < par.sample.size(); ++i)
        if (!same_coordinate(par.sample.coords[i], c.sample.coords[i]))
          rep.fail(where + ": sample coordinate " + std::to_string(i + 1) + " differs from parent");
    }
  }
  return rep;
}

CheckReport structure_check(const CAD& cad) {
  CheckReport rep;
  for (size_t k = 0; k < cad.levels.size(); ++k) {
    std::map<long, std::vector<const Cell*>> stacks;
    for (const auto& c : cad.levels[k]) stacks[c.parent].push_back(&c);
    if (k > 0 && stacks.size() != cad.levels[k - 1].size())
      rep.fail("level " + std::to_string(k + 1) + ": some base cell has no stack");
    for (const auto& [parent, cells] : stacks) {
      std::string where = "stack over " + (parent < 0 ? std::string("()") : index_to_string(cad.levels[k - 1][parent].index));
      if (cells.size() % 2 == 0) rep.fail(where + ": even number of cells");
      for (size_t i = 0; i < cells.size(); ++i) {
        const Cell& c = *cells[i];
        if (c.index.back() != static_cast<int>(i + 1)) rep.fail(where + ": non-contiguous index");
        int base_dim = parent < 0 ? 0 : cad.levels[k - 1][parent].dimension;
        bool section = (i + 1) % 2 == 0;
        if (section != (c.bounds.back().kind == Bound::Kind::Section)) rep.fail(where + ": section parity mismatch");
        if (c.dimension != base_dim + (section ? 0 : 1)) rep.fail(where + ": wrong dimension");
      }
    }
  }
  return rep;
}

}  // namespace cadkit
