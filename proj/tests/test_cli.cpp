#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Run cli(const std::string& args, const std::string& env = "") {
  const char* exe = std::getenv("CADKIT_CLI");
  REQUIRE(exe != nullptr);
  std::string cmd = env + (env.empty() ? "" : " ") + quote(exe) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string fixture(const std::string& name) { return quote(std::string(CADKIT_FIXTURES) + "/" + name); }

// Required RunReport members and their JSON types.
void check_schema(const json& r) {
  REQUIRE(r.is_object());
  CHECK(r["verb"].is_string());
  CHECK(r["input_digest"].is_string());
  CHECK(r["input_digest"].get<std::string>().size() == 16);
  CHECK(r["config"].is_object());
  CHECK(r["result"].is_object());
  CHECK(r["timings"].is_object());
  for (auto& [k, v] : r["timings"].items()) CHECK(v.get<double>() >= 0);
  if (r.contains("cells_per_level")) {
    CHECK(r["cells_per_level"].is_array());
    CHECK(r["full_dimensional"].is_number_unsigned());
  }
  // Serialization round trip.
  CHECK(json::parse(r.dump()) == r);
}

}  // namespace

TEST_CASE("qe verb") {
  auto r = cli("qe " + quote("exists y. y^2 = x") + " --order x,y");
  CHECK(r.code == 0);
  CHECK(r.out == "x = 0 \\/ x > 0\n");
  CHECK(cli("qe " + quote("exists y. y^2 = x") + " --merge").out == "x >= 0\n");
  auto j = cli("qe " + quote("exists y. y^2 = x") + " --format json");
  auto rep = json::parse(j.out);
  check_schema(rep);
  CHECK(rep["verb"] == "qe");
  CHECK(rep["formula"] == "x = 0 \\/ x > 0");
  CHECK(rep["cells_per_level"] == rep["result"]["cad"]["cells_per_level"]);
  CHECK(rep["timings"].contains("propagation_ms"));
  CHECK(cli("qe " + quote("forall x. x^2 >= 0") + " --decide").out == "true\n");
}

TEST_CASE("cad verb counts match the report") {
  auto r = cli("cad --input " + fixture("parabola.poly") + " --order a,b,c,x --operator mccallum --format json");
  REQUIRE(r.code == 0);
  auto rep = json::parse(r.out);
  check_schema(rep);
  CHECK(rep["result"]["cells"] == 115);
  CHECK(rep["cells_per_level"].back() == 115);
  CHECK(rep["timings"].contains("lifting_ms"));
  auto text = cli("cad --input " + fixture("parabola.poly") + " --order a,b,c,x");
  CHECK(text.out.find("115") != std::string::npos);
}

TEST_CASE("same digest and counts with more jobs") {
  std::string args = "cad --input " + fixture("circles.poly") + " --order x,y --format json";
  auto a = json::parse(cli(args).out);
  auto b = json::parse(cli(args, "CADKIT_JOBS=4").out);
  CHECK(a["input_digest"] == b["input_digest"]);
  CHECK(b["config"]["jobs"] == 4);
  CHECK(a["cells_per_level"] == b["cells_per_level"]);
  CHECK(json::parse(cli(args + " --jobs 2", "CADKIT_JOBS=4").out)["config"]["jobs"] == 2);
}

TEST_CASE("other verbs") {
  CHECK(cli("bounds --m 2 --d 1 --n 1 --which collins-cells").out == "collins-cells m=2 d=1 l=1 n=1: 256\n");
  auto g = json::parse(cli("bounds --m 1,2 --d 1,2 --format json").out);
  CHECK(g["result"]["bounds"].size() == 20);
  auto dh = json::parse(cli("gen-dh --m 2 --format json").out);
  CHECK(dh["result"]["order"] == "x2,y2,z2,x1,y1");
  auto cv = cli("ccd-validate " + fixture("parabola.ccd") + " --format json");
  CHECK(cv.code == 0);
  CHECK(json::parse(cv.out)["result"]["ok"] == true);
  auto cr = json::parse(cli("ccd-realize " + fixture("parabola.ccd") + " --format json").out);
  CHECK(cr["result"]["cells"] == 27);
  auto pr = json::parse(cli("project --input " + fixture("parabola.poly") + " --order a,b,c,x --format json").out);
  check_schema(pr);
  CHECK(pr["result"]["levels"].size() == 4);
}

TEST_CASE("fixture corpus passes") {
  auto r = cli("fixtures --format json");
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["failed"] == 0);
  CHECK(j["fixtures"].size() >= 15);
}

TEST_CASE("exit codes") {
  CHECK(cli("").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("qe").code == 2);
  CHECK(cli("cad --poly x --operator hong").code == 2);
  CHECK(cli("bounds --m 0").code == 2);
  CHECK(cli("bounds --which nope").code == 2);
  CHECK(cli("cad --input /nonexistent.poly").code == 2);
  CHECK(cli("qe " + quote("exists x. x^ > 0")).code == 1);
  CHECK(cli("cad --poly " + quote("x*w + y") + " --order x,y,z,w").code == 3);
  CHECK(cli("cad --poly " + quote("x*w + y") + " --order x,y,z,w --fallback collins").code == 0);
  CHECK(cli("ccd-validate /nonexistent.ccd").code == 2);
}
