#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cadkit/cadkit.h"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kNotWellOriented = 3, kInternal = 4 };

struct Failure {
  cadkit_status status;
  std::string message;
};

struct UsageError {
  std::string message;
};

void check(cadkit_status s) {
  if (s != CADKIT_OK) throw Failure{s, cadkit_last_error()};
}

int exit_code(cadkit_status s) {
  switch (s) {
    case CADKIT_ERR_NOT_WELL_ORIENTED: return kNotWellOriented;
    case CADKIT_ERR_INTERNAL:
    case CADKIT_ERR_NULL: return kInternal;
    default: return kFailure;
  }
}

struct CString {
  char* p = nullptr;
  ~CString() { cadkit_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

using Options = std::unique_ptr<cadkit_options, decltype(&cadkit_options_free)>;
using Cad = std::unique_ptr<cadkit_cad, decltype(&cadkit_cad_free)>;
using QeResult = std::unique_ptr<cadkit_qe_result, decltype(&cadkit_qe_free)>;
using Tree = std::unique_ptr<cadkit_ccd_tree, decltype(&cadkit_ccd_free)>;

struct Settings {
  std::string format = "text";
  std::string order;
  std::string op = "mccallum", lifting = "full", fallback = "abort", language = "extended";
  int jobs = -1;
  bool merge = false, allow_reduced = false, cells = false, track_projection = false;
  int probes = 3;
  unsigned seed = 1;
  size_t steps = 0;

  cadkit_format fmt() const { return format == "json" ? CADKIT_FORMAT_JSON : CADKIT_FORMAT_TEXT; }

  int effective_jobs() const {
    if (jobs >= 0) return jobs;
    if (const char* e = std::getenv("CADKIT_JOBS")) {
      try {
        return std::stoi(e);
      } catch (const std::exception&) {
        throw UsageError{"CADKIT_JOBS must be an integer"};
      }
    }
    return 1;
  }

  json config() const {
    return {{"operator", op},     {"lifting", lifting},        {"fallback", fallback},
            {"language", language}, {"jobs", effective_jobs()}, {"merge", merge},
            {"allow_reduced", allow_reduced}, {"order", order}};
  }

  Options make() const {
    Options o(cadkit_options_new(), cadkit_options_free);
    auto set = [&](const char* k, const std::string& v) {
      if (cadkit_options_set(o.get(), k, v.c_str()) != CADKIT_OK) throw UsageError{cadkit_last_error()};
    };
    set("operator", op);
    set("lifting", lifting);
    set("fallback", fallback);
    set("language", language);
    set("jobs", std::to_string(effective_jobs()));
    set("merge", merge ? "true" : "false");
    set("allow-reduced", allow_reduced ? "true" : "false");
    set("track-projection", track_projection ? "true" : "false");
    set("cells", cells ? "true" : "false");
    set("probes", std::to_string(probes));
    set("seed", std::to_string(seed));
    set("steps", std::to_string(steps));
    return o;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError{"cannot read " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Lines of a .poly or .fml file without '#' comments and blank lines.
std::vector<std::string> content_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    out.push_back(line.substr(b, line.find_last_not_of(" \t\r") - b + 1));
  }
  return out;
}

std::string joined(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::string digest(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const char* cstr_or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

// Input of cad and project: polynomials, or a formula for clause structure.
struct PolyInput {
  std::string file, formula, formula_file;
  std::vector<std::string> polys;

  bool is_formula() const { return !formula.empty() || !formula_file.empty(); }
  std::string formula_text() const { return formula.empty() ? joined(content_lines(read_file(formula_file)), " ") : formula; }
  std::vector<std::string> poly_list() const {
    std::vector<std::string> out = polys;
    if (!file.empty())
      for (auto& l : content_lines(read_file(file))) out.push_back(l);
    if (out.empty()) throw UsageError{"no input: pass --input, --poly or --formula"};
    return out;
  }
  std::string text() const { return is_formula() ? formula_text() : joined(poly_list(), "\n"); }
};

std::vector<const char*> pointers(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

Cad build_cad(const PolyInput& in, const Settings& s, const Options& o) {
  cadkit_cad* c = nullptr;
  if (in.is_formula()) {
    check(cadkit_cad_build_formula(in.formula_text().c_str(), cstr_or_null(s.order), o.get(), &c));
  } else {
    auto polys = in.poly_list();
    auto ptrs = pointers(polys);
    check(cadkit_cad_build(ptrs.data(), ptrs.size(), cstr_or_null(s.order), o.get(), &c));
  }
  return Cad(c, cadkit_cad_free);
}

std::string cad_report(const cadkit_cad* c, cadkit_format f) {
  CString r;
  check(cadkit_cad_report(c, f, &r.p));
  return r.str();
}

std::string project_report(const PolyInput& in, const Settings& s, const Options& o, cadkit_format f) {
  CString r;
  if (in.is_formula()) {
    check(cadkit_project_formula(in.formula_text().c_str(), cstr_or_null(s.order), o.get(), f, &r.p));
  } else {
    auto polys = in.poly_list();
    auto ptrs = pointers(polys);
    check(cadkit_project(ptrs.data(), ptrs.size(), cstr_or_null(s.order), o.get(), f, &r.p));
  }
  return r.str();
}

Tree parse_tree_file(const std::string& path) {
  cadkit_ccd_tree* t = nullptr;
  check(cadkit_ccd_parse(read_file(path).c_str(), &t));
  return Tree(t, cadkit_ccd_free);
}

// Run report around a library result.
json run_report(const std::string& verb, const std::string& input, const Settings& s, const json& result) {
  json r{{"verb", verb}, {"input_digest", digest(input)}, {"config", s.config()}, {"result", result}};
  const json* cad = nullptr;
  if (result.contains("cells_per_level")) cad = &result;
  else if (result.contains("cad") && result["cad"].is_object()) cad = &result["cad"];
  json timings = json::object();
  if (cad) {
    for (auto& [k, v] : (*cad)["timings"].items()) timings[k] = v;
    r["cells_per_level"] = (*cad)["cells_per_level"];
    r["full_dimensional"] = (*cad)["full_dimensional"];
  }
  if (result.contains("propagation_ms")) timings["propagation_ms"] = result["propagation_ms"];
  r["timings"] = timings;
  if (result.contains("formula")) r["formula"] = result["formula"];
  return r;
}

void emit(const std::string& verb, const std::string& input, const Settings& s, const std::string& lib_json,
          const std::string& text) {
  if (s.fmt() == CADKIT_FORMAT_JSON)
    std::cout << run_report(verb, input, s, json::parse(lib_json)).dump(2) << "\n";
  else
    std::cout << text;
}

std::vector<unsigned long> parse_grid(const std::string& spec, const char* name) {
  std::vector<unsigned long> out;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      size_t used = 0;
      long v = std::stol(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      out.push_back(static_cast<unsigned long>(v));
    } catch (const std::exception&) {
      throw UsageError{std::string("--") + name + " expects positive integers, got '" + item + "'"};
    }
  }
  if (out.empty()) throw UsageError{std::string("--") + name + " is empty"};
  return out;
}

// Fixture corpus -----------------------------------------------------------

struct FixtureOutcome {
  bool pass = true;
  std::string detail;
};

std::string fixture_path(const fs::path& dir, const json& args, const char* key) {
  return (dir / args.at(key).get<std::string>()).string();
}

Settings fixture_settings(const json& args) {
  Settings s;
  s.format = "json";
  s.jobs = 1;
  if (args.contains("order")) s.order = args["order"];
  if (args.contains("operator")) s.op = args["operator"];
  if (args.contains("lifting")) s.lifting = args["lifting"];
  if (args.contains("merge")) s.merge = args["merge"];
  if (args.contains("steps")) s.steps = args["steps"];
  return s;
}

json run_fixture(const fs::path& dir, const json& fx) {
  const std::string verb = fx.at("verb");
  const json& args = fx.at("args");
  Settings s = fixture_settings(args);
  Options o = s.make();
  PolyInput in;
  if (args.contains("input")) in.file = fixture_path(dir, args, "input");
  if (args.contains("formula")) in.formula = args["formula"];
  if (in.formula.rfind('@', 0) == 0)
    in.formula = joined(content_lines(read_file((dir / in.formula.substr(1)).string())), " ");
  if (args.contains("dh")) {
    CString f, ord;
    check(cadkit_generate_dh(args["dh"], args.at("base").get<std::string>().c_str(), &f.p, &ord.p));
    in.formula = f.str();
    s.order = ord.str();
  }
  if (verb == "cad") return json::parse(cad_report(build_cad(in, s, o).get(), CADKIT_FORMAT_JSON));
  if (verb == "project") return json::parse(project_report(in, s, o, CADKIT_FORMAT_JSON));
  if (verb == "qe") {
    cadkit_qe_result* r = nullptr;
    check(cadkit_qe(in.formula.c_str(), cstr_or_null(s.order), o.get(), &r));
    QeResult h(r, cadkit_qe_free);
    CString rep;
    check(cadkit_qe_report(h.get(), CADKIT_FORMAT_JSON, &rep.p));
    return json::parse(rep.str());
  }
  if (verb == "decide") {
    int truth = -1;
    check(cadkit_decide(in.formula.c_str(), cstr_or_null(s.order), o.get(), &truth));
    return {{"truth", truth == 1}};
  }
  if (verb == "ccd-realize") {
    Tree t = parse_tree_file(in.file);
    cadkit_cad* c = nullptr;
    check(cadkit_ccd_realize(t.get(), o.get(), &c));
    Cad h(c, cadkit_cad_free);
    json j = json::parse(cad_report(h.get(), CADKIT_FORMAT_JSON));
    j["leaves"] = cadkit_ccd_leaf_count(t.get());
    j["checks"] = cadkit_cad_check(h.get()) == 1;
    return j;
  }
  if (verb == "ccd-validate") {
    Tree t = parse_tree_file(in.file);
    int ok = 0;
    CString rep;
    check(cadkit_ccd_validate(t.get(), o.get(), &ok, CADKIT_FORMAT_JSON, &rep.p));
    return json::parse(rep.str());
  }
  if (verb == "bounds") {
    CString v;
    check(cadkit_bound(args.at("which").get<std::string>().c_str(), args.at("m"), args.at("d"), args.value("l", 1UL),
                       args.at("n"), &v.p));
    return {{"value", v.str()}};
  }
  if (verb == "gen-dh") {
    CString f, ord;
    check(cadkit_generate_dh(args.at("m"), args.at("base").get<std::string>().c_str(), &f.p, &ord.p));
    return {{"formula", f.str()}, {"order", ord.str()}};
  }
  throw UsageError{"fixture verb '" + verb + "' is not supported"};
}

// Each expectation is a JSON pointer into the result with its value; the
// key "@polys" compares the set of projection polynomials over all levels.
FixtureOutcome compare(const json& result, const json& expect) {
  FixtureOutcome out;
  for (auto& [key, want] : expect.items()) {
    json got;
    if (key == "@polys") {
      std::set<std::string> all;
      for (const auto& l : result.at("levels"))
        for (const auto& p : l.at("polynomials")) all.insert(p.at("poly").get<std::string>());
      got = all;
      std::set<std::string> w = want.get<std::set<std::string>>();
      if (all == w) continue;
    } else if (key.rfind("@prefix:", 0) == 0) {
      std::string ptr = key.substr(8);
      got = result.at(json::json_pointer(ptr));
      if (got.is_string() && got.get<std::string>().rfind(want.get<std::string>(), 0) == 0) continue;
    } else {
      got = result.value(json::json_pointer(key), json());
      if (got == want) continue;
    }
    out.pass = false;
    out.detail += key + ": expected " + want.dump() + ", got " + got.dump() + "; ";
  }
  return out;
}

int run_fixtures(const std::string& dir, const Settings& s) {
  fs::path base(dir);
  json manifest = json::parse(read_file((base / "fixtures.json").string()));
  json rows = json::array();
  size_t failed = 0;
  for (const auto& fx : manifest) {
    auto t0 = std::chrono::steady_clock::now();
    FixtureOutcome o;
    try {
      o = compare(run_fixture(base, fx), fx.at("expect"));
    } catch (const Failure& f) {
      o = {false, cadkit_status_name(f.status) + std::string(": ") + f.message};
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    rows.push_back({{"name", fx.at("name")}, {"pass", o.pass}, {"ms", ms}, {"detail", o.detail}});
  }
  if (s.fmt() == CADKIT_FORMAT_JSON) {
    std::cout << json{{"verb", "fixtures"}, {"fixtures", rows}, {"failed", failed}}.dump(2) << "\n";
  } else {
    for (const auto& r : rows) {
      std::printf("%-4s  %-46s %9.1f ms", r["pass"].get<bool>() ? "PASS" : "FAIL",
                  r["name"].get<std::string>().c_str(), r["ms"].get<double>());
      if (!r["pass"].get<bool>()) std::printf("  %s", r["detail"].get<std::string>().c_str());
      std::printf("\n");
    }
    std::printf("%zu of %zu fixtures passed\n", rows.size() - failed, rows.size());
  }
  return failed == 0 ? kOk : kFailure;
}

void add_cad_options(CLI::App* app, Settings& s) {
  app->add_option("--operator", s.op, "collins, mccallum, ec or tti");
  app->add_option("--lifting", s.lifting, "full or ec");
  app->add_option("--fallback", s.fallback, "abort or collins (restart when not well-oriented)");
  app->add_option("-j,--jobs", s.jobs, "worker threads for lifting (0 = all cores; default CADKIT_JOBS or 1)");
}

void add_common(CLI::App* app, Settings& s) {
  app->add_option("--format", s.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app->add_option("--order", s.order,
                  "variables from first projected to last, e.g. a,b,c,x (x is eliminated first)");
}

void add_poly_input(CLI::App* app, PolyInput& in) {
  app->add_option("-i,--input", in.file, ".poly file, one polynomial per line");
  app->add_option("-p,--poly", in.polys, "polynomial (repeatable)");
  app->add_option("-f,--formula", in.formula, "quantifier-free formula (clauses for ec/tti)");
  app->add_option("--formula-file", in.formula_file, ".fml file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cylindrical algebraic decomposition and real quantifier elimination"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cadkit_version()));
  Settings s;
  PolyInput in;
  std::string formula, formula_file, tree_file, which = "all", base = "y1 = x1^2";
  std::string gm = "1", gd = "1", gl = "1", gn = "1";
  std::string fixture_dir = CADKIT_FIXTURE_DIR;
  bool use_decide = false;
  int dh_m = 2;

  auto* qe = app.add_subcommand("qe", "eliminate quantifiers from a formula");
  add_common(qe, s);
  add_cad_options(qe, s);
  qe->add_option("formula", formula, "formula text");
  qe->add_option("-i,--input", formula_file, ".fml file");
  qe->add_option("--language", s.language, "extended (indexed roots) or thom");
  qe->add_flag("--merge", s.merge, "merge adjacent true cells");
  qe->add_flag("--allow-reduced", s.allow_reduced, "allow ec/tti with free and quantified variables");
  qe->add_flag("--cells", s.cells, "list the CAD cells");
  qe->add_flag("--decide", use_decide, "decide a sentence by depth-first lifting");

  auto* cad = app.add_subcommand("cad", "build a CAD");
  add_common(cad, s);
  add_cad_options(cad, s);
  add_poly_input(cad, in);
  cad->add_option("--language", s.language, "cell descriptions: extended or thom");
  cad->add_flag("--cells", s.cells, "list every top-level cell");
  cad->add_flag("--track-projection", s.track_projection, "record signs of all projection polynomials");

  auto* proj = app.add_subcommand("project", "projection sets per level");
  add_common(proj, s);
  proj->add_option("--operator", s.op, "collins, mccallum, ec or tti");
  proj->add_option("--steps", s.steps, "stop after this many projection steps (0 = all)");
  add_poly_input(proj, in);

  auto* cv = app.add_subcommand("ccd-validate", "check separation of a complex cylindrical decomposition tree");
  add_common(cv, s);
  cv->add_option("input", tree_file, ".ccd file")->required();
  cv->add_option("--probes", s.probes, "probe points per cell");
  cv->add_option("--seed", s.seed, "random seed");

  auto* cr = app.add_subcommand("ccd-realize", "real CAD from a complex cylindrical decomposition tree");
  add_common(cr, s);
  cr->add_option("input", tree_file, ".ccd file")->required();
  cr->add_option("-j,--jobs", s.jobs, "worker threads");
  cr->add_flag("--cells", s.cells, "list every top-level cell");

  auto* bounds = app.add_subcommand("bounds", "complexity bound expressions over a parameter grid");
  add_common(bounds, s);
  bounds->add_option("--m", gm, "number of polynomials (comma list)");
  bounds->add_option("--d", gd, "degree bound (comma list)");
  bounds->add_option("--l", gl, "coefficient length (comma list)");
  bounds->add_option("--n", gn, "number of variables (comma list)");
  bounds->add_option("--which", which, "bound names (comma list) or all");

  auto* dh = app.add_subcommand("gen-dh", "doubly-exponential formula family");
  add_common(dh, s);
  dh->add_option("--m", dh_m, "number of steps")->required();
  dh->add_option("--base", base, "base equation y1 = F(x1)");

  auto* fx = app.add_subcommand("fixtures", "run the bundled example corpus");
  add_common(fx, s);
  fx->add_option("--dir", fixture_dir, "fixture directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    cadkit_format f = s.fmt();
    if (*qe) {
      std::string text = formula.empty() ? "" : formula;
      if (!formula_file.empty()) text = joined(content_lines(read_file(formula_file)), " ");
      if (text.empty()) throw UsageError{"qe needs a formula or --input"};
      Options o = s.make();
      if (use_decide) {
        int truth = -1;
        check(cadkit_decide(text.c_str(), cstr_or_null(s.order), o.get(), &truth));
        json r{{"truth", truth == 1}, {"formula", truth == 1 ? "true" : "false"}};
        emit("qe", text, s, r.dump(), r["formula"].get<std::string>() + "\n");
        return kOk;
      }
      cadkit_qe_result* r = nullptr;
      check(cadkit_qe(text.c_str(), cstr_or_null(s.order), o.get(), &r));
      QeResult h(r, cadkit_qe_free);
      CString rep, js;
      check(cadkit_qe_report(h.get(), CADKIT_FORMAT_TEXT, &rep.p));
      if (f == CADKIT_FORMAT_JSON) check(cadkit_qe_report(h.get(), CADKIT_FORMAT_JSON, &js.p));
      emit("qe", text, s, js.str(), rep.str());
    } else if (*cad) {
      Options o = s.make();
      Cad c = build_cad(in, s, o);
      emit("cad", in.text(), s, f == CADKIT_FORMAT_JSON ? cad_report(c.get(), f) : "",
           f == CADKIT_FORMAT_TEXT ? cad_report(c.get(), f) : "");
    } else if (*proj) {
      Options o = s.make();
      std::string rep = project_report(in, s, o, f);
      emit("project", in.text(), s, rep, rep);
    } else if (*cv) {
      Options o = s.make();
      Tree t = parse_tree_file(tree_file);
      int ok = 0;
      CString rep;
      check(cadkit_ccd_validate(t.get(), o.get(), &ok, f, &rep.p));
      emit("ccd-validate", read_file(tree_file), s, rep.str(), rep.str());
      return ok ? kOk : kFailure;
    } else if (*cr) {
      Options o = s.make();
      Tree t = parse_tree_file(tree_file);
      cadkit_cad* c = nullptr;
      check(cadkit_ccd_realize(t.get(), o.get(), &c));
      Cad h(c, cadkit_cad_free);
      std::string rep = cad_report(h.get(), f);
      if (f == CADKIT_FORMAT_TEXT) rep = "leaves: " + std::to_string(cadkit_ccd_leaf_count(t.get())) + "\n" + rep;
      emit("ccd-realize", read_file(tree_file), s, rep, rep);
    } else if (*bounds) {
      std::vector<std::string> names;
      if (which == "all")
        names = {"collins-time", "collins-cells", "mccallum-cells", "mccallum-cells-refined", "davenport-time"};
      else
        for (std::stringstream ss(which); std::getline(ss, which, ',');) names.push_back(which);
      for (const auto& w : names) {
        CString probe;
        if (cadkit_bound(w.c_str(), 1, 1, 1, 1, &probe.p) != CADKIT_OK) throw UsageError{cadkit_last_error()};
      }
      json rows = json::array();
      std::ostringstream text;
      for (const auto& w : names)
        for (auto m : parse_grid(gm, "m"))
          for (auto d : parse_grid(gd, "d"))
            for (auto l : parse_grid(gl, "l"))
              for (auto n : parse_grid(gn, "n")) {
                CString v;
                check(cadkit_bound(w.c_str(), m, d, l, n, &v.p));
                rows.push_back({{"which", w}, {"m", m}, {"d", d}, {"l", l}, {"n", n}, {"value", v.str()}});
                text << w << " m=" << m << " d=" << d << " l=" << l << " n=" << n << ": " << v.str() << "\n";
              }
      json r{{"bounds", rows}};
      emit("bounds", gm + "|" + gd + "|" + gl + "|" + gn + "|" + which, s, r.dump(), text.str());
    } else if (*dh) {
      CString fml, ord;
      check(cadkit_generate_dh(dh_m, base.c_str(), &fml.p, &ord.p));
      json r{{"formula", fml.str()}, {"order", ord.str()}};
      emit("gen-dh", base + "|" + std::to_string(dh_m), s, r.dump(), "order: " + ord.str() + "\n" + fml.str() + "\n");
    } else if (*fx) {
      return run_fixtures(fixture_dir, s);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.message << "\n";
    return kUsage;
  } catch (const Failure& e) {
    std::cerr << "error (" << cadkit_status_name(e.status) << "): " << e.message << "\n";
    return exit_code(e.status);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
