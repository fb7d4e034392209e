#include "cadkit/cadkit.h"

#include <cstring>
#include <regex>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cadkit/ccd.hpp"
#include "cadkit/error.hpp"
#include "cadkit/meta.hpp"
#include "cadkit/qe.hpp"

using namespace cadkit;
using nlohmann::json;

struct cadkit_options {
  QEConfig qe;
  bool cells = false;
  int probes = 3;
  unsigned seed = 1;
  size_t steps = 0;
};

struct cadkit_cad {
  CAD cad;
  cadkit_options opts;
};

struct cadkit_qe_result {
  QEResult res;
  cadkit_options opts;
};

struct cadkit_ccd_tree {
  CCDTree tree;
};

namespace {

thread_local std::string g_error;

cadkit_status fail(cadkit_status s, const std::string& msg) {
  g_error = msg;
  return s;
}

template <class F>
cadkit_status guard(F&& f) {
  g_error.clear();
  try {
    f();
    return CADKIT_OK;
  } catch (const ParseError& e) {
    return fail(CADKIT_ERR_PARSE, e.what());
  } catch (const OrderError& e) {
    return fail(CADKIT_ERR_ORDER, e.what());
  } catch (const NotWellOriented& e) {
    return fail(CADKIT_ERR_NOT_WELL_ORIENTED, e.what());
  } catch (const SeparationError& e) {
    return fail(CADKIT_ERR_SEPARATION, e.what());
  } catch (const InvalidArgument& e) {
    return fail(CADKIT_ERR_INVALID, e.what());
  } catch (const std::exception& e) {
    return fail(CADKIT_ERR_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InvalidArgument("expected true or false, got '" + v + "'");
}

unsigned long parse_count(const std::string& v) {
  size_t used = 0;
  unsigned long x = 0;
  try {
    x = std::stoul(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty() || v[0] == '-') throw InvalidArgument("expected a nonnegative integer, got '" + v + "'");
  return x;
}

// Identifiers in order of first appearance.
OrderPtr infer_order(const std::vector<std::string>& texts) {
  static const std::regex ident("[A-Za-z_][A-Za-z0-9_]*");
  std::vector<std::string> names;
  std::set<std::string> seen;
  for (const auto& t : texts)
    for (auto it = std::sregex_iterator(t.begin(), t.end(), ident); it != std::sregex_iterator(); ++it)
      if (seen.insert(it->str()).second) names.push_back(it->str());
  if (names.empty()) throw InvalidArgument("no variables; pass an order");
  return make_order(names);
}

OrderPtr order_or_null(const char* order) { return order && *order ? parse_order(order) : nullptr; }

const cadkit_options& opts_or_default(const cadkit_options* o) {
  static const cadkit_options defaults;
  return o ? *o : defaults;
}

std::vector<std::string> names_of(const OrderPtr& o) { return o->names(); }

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::string signs_text(const Cell& c) {
  std::string s;
  for (auto g : c.signs) s += sign_symbol(g);
  return s;
}

json cad_json(const CAD& cad, const cadkit_options& o) {
  json j;
  j["order"] = names_of(cad.order);
  j["operator"] = operator_name(cad.op);
  j["lifting"] = lifting_name(cad.lifting);
  j["invariance"] = cad.kind == InvarianceKind::SignInvariant ? "sign" : "truth-table";
  std::vector<size_t> per;
  for (const auto& l : cad.levels) per.push_back(l.size());
  j["cells_per_level"] = per;
  j["cells"] = cad.levels.empty() ? 0 : cad.top().size();
  j["full_dimensional"] = cad.full_dimensional_count();
  std::vector<std::string> tracked;
  for (const auto& p : cad.tracked) tracked.push_back(p.to_string());
  j["tracked"] = tracked;
  j["timings"] = {{"projection_ms", cad.stats.projection_ms},
                  {"base_ms", cad.stats.base_ms},
                  {"lifting_ms", cad.stats.lifting_ms}};
  j["notes"] = cad.notes;
  if (o.cells && !cad.levels.empty()) {
    json cells = json::array();
    for (const auto& c : cad.top())
      cells.push_back({{"index", index_to_string(c.index)},
                       {"dimension", c.dimension},
                       {"sample", approximate(c.sample)},
                       {"signs", signs_text(c)},
                       {"description", to_string(describe_cell(cad, c, o.qe.language), cad.order)}});
    j["cell_list"] = cells;
  }
  return j;
}

std::string cad_text(const json& j) {
  std::ostringstream s;
  s << "order: " << join(j["order"].get<std::vector<std::string>>(), ", ") << "\n";
  s << "operator: " << j["operator"].get<std::string>() << " (lifting " << j["lifting"].get<std::string>() << ", "
    << j["invariance"].get<std::string>() << "-invariant)\n";
  s << "cells: " << j["cells"].get<size_t>() << "\n";
  s << "full-dimensional: " << j["full_dimensional"].get<size_t>() << "\n";
  std::vector<std::string> per;
  for (const auto& v : j["cells_per_level"]) per.push_back(std::to_string(v.get<size_t>()));
  s << "cells per level: " << join(per, " ") << "\n";
  const auto& t = j["timings"];
  s << "timings (ms): projection " << t["projection_ms"].get<double>() << ", base " << t["base_ms"].get<double>()
    << ", lifting " << t["lifting_ms"].get<double>() << "\n";
  for (const auto& n : j["notes"]) s << "note: " << n.get<std::string>() << "\n";
  if (j.contains("cell_list"))
    for (const auto& c : j["cell_list"])
      s << c["index"].get<std::string>() << " [" << c["signs"].get<std::string>() << "] "
        << c["description"].get<std::string>() << "\n";
  return s.str();
}

std::string render(const json& j, cadkit_format f, const std::string& text) {
  return f == CADKIT_FORMAT_JSON ? j.dump(2) + "\n" : text;
}

std::string projection_report(const ProjectionLevels& pl, cadkit_format f) {
  const OrderPtr& o = pl.order;
  json j;
  j["order"] = names_of(o);
  j["operator"] = operator_name(pl.op);
  json levels = json::array();
  std::ostringstream s;
  for (size_t k = pl.levels.size(); k-- > 0;) {
    json polys_j = json::array();
    s << o->name(k) << ":\n";
    for (const auto& pp : pl.levels[k]) {
      polys_j.push_back({{"poly", pp.poly.to_string()},
                         {"kind", provenance_name(pp.kind)},
                         {"splitting", pp.splitting},
                         {"parents", pp.parents}});
      s << "  " << pp.poly.to_string() << "  (" << provenance_name(pp.kind) << (pp.splitting ? "" : ", not splitting")
        << ")\n";
    }
    levels.push_back({{"variable", o->name(k)}, {"polynomials", polys_j}});
  }
  j["levels"] = levels;
  j["top_counts"] = {{"coefficients", pl.top_counts.coefficients},
                     {"discriminants", pl.top_counts.discriminants},
                     {"resultants", pl.top_counts.resultants}};
  j["notes"] = pl.notes;
  s << "top step: " << pl.top_counts.coefficients << " coefficients, " << pl.top_counts.discriminants
    << " discriminants, " << pl.top_counts.resultants << " resultants\n";
  for (const auto& n : pl.notes) s << "note: " << n << "\n";
  return render(j, f, s.str());
}

}  // namespace

extern "C" {

const char* cadkit_version(void) { return "0.1.0"; }
const char* cadkit_last_error(void) { return g_error.c_str(); }

const char* cadkit_status_name(cadkit_status s) {
  switch (s) {
    case CADKIT_OK: return "ok";
    case CADKIT_ERR_PARSE: return "parse error";
    case CADKIT_ERR_ORDER: return "order error";
    case CADKIT_ERR_INVALID: return "invalid argument";
    case CADKIT_ERR_NOT_WELL_ORIENTED: return "not well-oriented";
    case CADKIT_ERR_SEPARATION: return "separation failure";
    case CADKIT_ERR_INTERNAL: return "internal error";
    case CADKIT_ERR_NULL: return "null argument";
  }
  return "unknown";
}

void cadkit_string_free(char* s) { std::free(s); }

cadkit_options* cadkit_options_new(void) { return new cadkit_options(); }
void cadkit_options_free(cadkit_options* o) { delete o; }

cadkit_status cadkit_options_set(cadkit_options* o, const char* key, const char* value) {
  if (!o || !key || !value) return fail(CADKIT_ERR_NULL, "null argument");
  return guard([&] {
    std::string k = key, v = value;
    if (k == "operator") o->qe.cad.op = parse_operator(v);
    else if (k == "lifting") o->qe.cad.lifting = parse_lifting(v);
    else if (k == "fallback") o->qe.cad.fallback = parse_fallback(v);
    else if (k == "jobs") o->qe.cad.jobs = static_cast<unsigned>(parse_count(v));
    else if (k == "language") {
      if (v == "extended") o->qe.language = DescribeMode::Extended;
      else if (v == "thom") o->qe.language = DescribeMode::Thom;
      else throw InvalidArgument("unknown language '" + v + "' (expected extended or thom)");
    } else if (k == "merge") o->qe.merge = parse_bool(v);
    else if (k == "allow-reduced") o->qe.allow_reduced_with_free = parse_bool(v);
    else if (k == "track-projection") o->qe.cad.track_projection = parse_bool(v);
    else if (k == "cells") o->cells = parse_bool(v);
    else if (k == "probes") o->probes = static_cast<int>(parse_count(v));
    else if (k == "seed") o->seed = static_cast<unsigned>(parse_count(v));
    else if (k == "steps") o->steps = parse_count(v);
    else throw InvalidArgument("unknown option '" + k + "'");
  });
}

cadkit_status cadkit_cad_build(const char* const* polys, size_t count, const char* order, const cadkit_options* opts,
                               cadkit_cad** out) {
  if (!out || (count && !polys)) return fail(CADKIT_ERR_NULL, "null argument");
  return guard([&] {
    std::vector<std::string> texts;
    for (size_t i = 0; i < count; ++i) {
      if (!polys[i]) throw InvalidArgument("null polynomial");
      texts.emplace_back(polys[i]);
    }
    OrderPtr o = order_or_null(order);
    if (!o) o = infer_order(texts);
    ProjectionInput in{o, {}, {}};
    for (const auto& t : texts) in.polys.push_back(parse_polynomial(t, o));
    const auto& op = opts_or_default(opts);
    if (op.qe.cad.op == ProjectionOperator::EC || op.qe.cad.op == ProjectionOperator::TTI)
      throw InvalidArgument("ec and tti need clause structure; build from a formula instead");
    *out = new cadkit_cad{build_cad(in, op.qe.cad), op};
  });
}

cadkit_status cadkit_cad_build_formula(const char* formula, const char* order, const cadkit_options* opts,
                                       cadkit_cad** out) {
  if (!out || !formula) return fail(CADKIT_ERR_NULL, "null argument");
  return guard([&] {
    auto p = parse_formula(formula, order_or_null(order));
    if (!is_quantifier_free(p.formula)) throw InvalidArgument("cad input must be quantifier-free; use qe");
    const auto& op = opts_or_default(opts);
    ProjectionInput in{p.order, atom_polynomials(p.formula), {}};
    CadConfig cc = op.qe.cad;
    if (cc.op == ProjectionOperator::EC || cc.op == ProjectionOperator::TTI) {
      auto cl = clauses_of(p.formula);
      if (!cl) throw InvalidArgument("ec and tti need a disjunction of conjunctions of atoms");
      in.clauses = std::move(*cl);
      in.polys.clear();
    }
    *out = new cadkit_cad{build_cad(in, cc), op};
  });
}

void cadkit_cad_free(cadkit_cad* c) { delete c; }
size_t cadkit_cad_dimension(const cadkit_cad* c) { return c ? c->cad.dimension() : 0; }

size_t cadkit_cad_level_size(const cadkit_cad* c, size_t k) {
  if (!c || k == 0 || k > c->cad.dimension()) return 0;
  return c->cad.cells(k).size();
}

size_t cadkit_cad_full_dimensional(const cadkit_cad* c) { return c ? c->cad.full_dimensional_count() : 0; }

int cadkit_cad_check(const cadkit_cad* c) {
  if (!c) return 0;
  return cylindricity_check(c->cad).ok && structure_check(c->cad).ok;
}

cadkit_status cadkit_cad_report(const cadkit_cad* c, cadkit_format f, char** out) {
  if (!c || !out) return fail(CADKIT_ERR_NULL, "null argument");
  return guard([&] {
    json j = cad_json(c->cad, c->opts);
    *out = dup(render(j, f, cad_text(j)));
  });
}

cadkit_status cadkit_project(const char* const* polys, size_t count, const char* order, const cadkit_options* opts,
                             cadkit_format f, char** out) {
  if (!out || (count && !polys)) return fail(CADKIT_ERR_NULL, "null argument");
  return guard([&] {
    std::vector<std::string> texts;
    for (size_t i = 0; i < count; ++i) texts.emplace_back(polys[i] ? polys[i] : "");
    OrderPtr o = order_or_null(order);
    if (!o) o = infer_order(texts);
    ProjectionInput in{o, {}, {}};
    for (const auto& t : texts) in.polys.push_back(parse_polynomial(t, o));
    auto op = opts_or_default(opts).qe.cad.op;
    if (op == ProjectionOperator::EC || op == ProjectionOperator::TTI)
      throw InvalidArgument("ec and tti need clause structure; project a formula instead");
    *out = dup(projection_report(project_all(in, op, opts_or_default(opts).steps), f));
  });
}

cadkit_status cadkit_project_formula(const char* formula, const char* order, const cadkit_options* opts,
                                     cadkit_format f, char** out) {
  if (!out || !formula) return fail(CADKIT_ERR_NULL, "null argument");
  return guard([&] {
    auto p = parse_formula(formula, order_or_null(order));
    if (!is_quantifier_free(p.formula)) throw InvalidArgument("projection input must be quantifier-free");
    ProjectionInput in{p.order, atom_polynomials(p.formula), {}};
    auto op = opts_or_default(opts).qe.cad.op;
    if (op == ProjectionOperator::EC || op == ProjectionOperator::TTI) {
      auto cl = clauses_of(p.formula);
      if (!cl) throw InvalidArgument("ec and tti need a disjunction of conjunctions of atoms");
      in.clauses = std::move(*cl);
      in.polys.clear();
    }
    *out = dup(projection_report(project_all(in, op, opts_or_default(opts).steps), f));
  });
}

cadkit_status cadkit_qe(const char* formula, const char* order, const cadkit_options* opts, cadkit_qe_result** out) {
  if (!out || !formula) return fail(CADKIT_ERR_NULL, "null argument");
  return guard([&] {
    const auto& op = opts_or_default(opts);
    *out = new cadkit_qe_result{qe(formula, order_or_null(order), op.qe), op};
  });
}

void cadkit_qe_free(cadkit_qe_result* r) { delete r; }

cadkit_status cadkit_qe_formula(const cadkit_qe_result* r, char** out) {
  if (!r || !out) return fail(CADKIT_ERR_NULL, "null argument");
  return guard([&] { *out = dup(to_string(r->res.formula, r->res.order)); });
}

int cadkit_qe_truth(const cadkit_qe_result* r) {
  if (!r || !r->res.truth) return -1;
  return *r->res.truth ? 1 : 0;
}

cadkit_status cadkit_qe_report(const cadkit_qe_result* r, cadkit_format f, char** out) {
  if (!r || !out) return fail(CADKIT_ERR_NULL, "null argument");
  return guard([&] {
    const QEResult& q = r->res;
    json j;
    j["formula"] = to_string(q.formula, q.order);
    j["truth"] = q.truth ? json(*q.truth) : json(nullptr);
    j["prenex"] = to_string(q.prenex.to_formula(), q.order);
    j["free_variables"] = q.prenex.free_count;
    j["alternations"] = q.prenex.alternations();
    j["true_cells"] = q.true_cells;
    if (q.witness) {
      std::vector<std::string> vals;
      for (const auto& v : q.witness->values) vals.push_back(coordinate_to_string(v));
      j["witness"] = {{"names", q.witness->names}, {"values", vals}, {"counterexample", q.witness->counterexample}};
    }
    j["cad"] = q.cad ? cad_json(*q.cad, r->opts) : json(nullptr);
    j["propagation_ms"] = q.propagation_ms;
    j["notes"] = q.notes;
    std::ostringstream s;
    s << j["formula"].get<std::string>() << "\n";
    if (q.witness) {
      s << (q.witness->counterexample ? "counterexample:" : "witness:");
      for (size_t i = 0; i < q.witness->names.size(); ++i)
        s << " " << q.witness->names[i] << " = " << j["witness"]["values"][i].get<std::string>();
      s << "\n";
    }
    for (const auto& n : q.notes) s << "note: " << n << "\n";
    *out = dup(render(j, f, s.str()));
  });
}

cadkit_status cadkit_decide(const char* sentence, const char* order, const cadkit_options* opts, int* truth) {
  if (!sentence || !truth) return fail(CADKIT_ERR_NULL, "null argument");
  return guard([&] {
    auto p = parse_formula(sentence, order_or_null(order));
    *truth = decide(p.formula, p.order, opts_or_default(opts).qe.cad).truth ? 1 : 0;
  });
}

cadkit_status cadkit_ccd_parse(const char* text, cadkit_ccd_tree** out) {
  if (!text || !out) return fail(CADKIT_ERR_NULL, "null argument");
  return guard([&] { *out = new cadkit_ccd_tree{parse_tree(text)}; });
}

void cadkit_ccd_free(cadkit_ccd_tree* t) { delete t; }
size_t cadkit_ccd_leaf_count(const cadkit_ccd_tree* t) { return t ? t->tree.leaf_count() : 0; }

cadkit_status cadkit_ccd_validate(const cadkit_ccd_tree* t, const cadkit_options* opts, int* ok, cadkit_format f,
                                  char** report) {
  if (!t || !ok) return fail(CADKIT_ERR_NULL, "null argument");
  return guard([&] {
    const auto& op = opts_or_default(opts);
    auto rep = validate_separation(t->tree, op.probes, op.seed);
    *ok = rep.ok ? 1 : 0;
    if (!report) return;
    json j{{"ok", rep.ok},
           {"leaves", t->tree.leaf_count()},
           {"nodes_checked", rep.nodes_checked},
           {"probes", rep.probes},
           {"violations", rep.violations},
           {"search_failures", rep.search_failures}};
    std::ostringstream s;
    s << (rep.ok ? "separable" : "NOT separable") << ": " << rep.nodes_checked << " nodes checked with " << rep.probes
      << " probes, " << t->tree.leaf_count() << " leaves\n";
    for (const auto& v : rep.violations) s << "violation: " << v << "\n";
    for (const auto& v : rep.search_failures) s << "no probe found: " << v << "\n";
    *report = dup(render(j, f, s.str()));
  });
}

cadkit_status cadkit_ccd_realize(const cadkit_ccd_tree* t, const cadkit_options* opts, cadkit_cad** out) {
  if (!t || !out) return fail(CADKIT_ERR_NULL, "null argument");
  return guard([&] {
    const auto& op = opts_or_default(opts);
    *out = new cadkit_cad{make_semialgebraic(t->tree, op.qe.cad.jobs).cad, op};
  });
}

cadkit_status cadkit_bound(const char* which, unsigned long m, unsigned long d, unsigned long l, unsigned long n,
                           char** out) {
  if (!which || !out) return fail(CADKIT_ERR_NULL, "null argument");
  return guard([&] { *out = dup(bound({m, d, l, n}, parse_bound_kind(which)).get_str()); });
}

cadkit_status cadkit_generate_dh(int m, const char* base, char** formula, char** order) {
  if (!base || !formula) return fail(CADKIT_ERR_NULL, "null argument");
  return guard([&] {
    auto p = generate_dh(m, base);
    *formula = dup(to_string(p.formula, p.order));
    if (order) *order = dup(join(p.order->names(), ","));
  });
}

}  // extern "C"
