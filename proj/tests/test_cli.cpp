#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') q += "'\\''";
    else q += c;
  }
  return q + "'";
}

Run run(const std::string& args, const std::string& stdin_text = "") {
  std::string cmd = quote(MLUC_CLI_PATH) + " " + args + " 2>&1";
  if (!stdin_text.empty()) cmd = "printf '%s' " + quote(stdin_text) + " | " + cmd;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  Run r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("mluc_cli_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("solve exit codes") {
  const Run inf = run("solve -e " + quote("x != 0 && z = x*x && z <= x"));
  CHECK(inf.code == 0);
  CHECK(inf.out.find("sat-infinite-only") != std::string::npos);

  const Run uns = run("solve -e " + quote("x = x - x && x != 0"));
  CHECK(uns.code == 1);
  CHECK(uns.out.find("unsat") != std::string::npos);

  const Run bad = run("solve -e " + quote("x = = y"));
  CHECK(bad.code == 2);
  CHECK(bad.out.find("syntax error") != std::string::npos);

  CHECK(run("solve " + quote("/nonexistent/formula.txt")).code == 2);
  CHECK(run("solve --max-vars 1 -e " + quote("x != y")).code == 2);
}

TEST_CASE("json verdicts") {
  const Run r = run("solve --format json -e " + quote("x != 0 && z = x*x && z <= x"));
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["status"] == "sat-infinite-only");
  CHECK(j["cycle"].is_array());
  CHECK(j["certificate"]["otimes"].size() == 1);

  const Run fin = run("solve --format json -e " + quote("x != 0"));
  CHECK_FALSE(nlohmann::json::parse(fin.out).contains("certificate"));
  const Run dumped = run("solve --format json --dump-certificate -e " + quote("x != 0"));
  CHECK(nlohmann::json::parse(dumped.out)["certificate"]["places"].size() == 1);
}

TEST_CASE("check") {
  const std::string model = temp_file("model.json", R"({"vars": {"x": [[]]}})");
  const Run ok = run("check -e " + quote("x != 0") + " --model " + quote(model));
  CHECK(ok.code == 0);
  CHECK(ok.out.find("formula: true") != std::string::npos);

  const Run no = run("check -e " + quote("x = 0") + " --model " + quote(model));
  CHECK(no.code == 1);

  const std::string junk = temp_file("junk.json", R"({"vars": {"x": 7}})");
  CHECK(run("check -e " + quote("x != 0") + " --model " + quote(junk)).code == 2);
}

TEST_CASE("solve output is accepted by check") {
  const std::string f = "x != 0 && z != 0 && z <= x*x && z <= x";
  const Run s = run("solve --format json -e " + quote(f));
  REQUIRE(s.code == 0);
  CHECK(nlohmann::json::parse(s.out)["status"] == "sat-finite");
  const std::string verdict = temp_file("verdict.json", s.out);
  const Run c = run("check -e " + quote(f) + " --model " + quote(verdict));
  CHECK(c.code == 0);
  CHECK(c.out.find("false") == std::string::npos);
}

TEST_CASE("stdin input") {
  const Run r = run("solve -", "x != 0 && z <= x*x && z <= x");
  CHECK(r.code == 0);
  CHECK(r.out.find("sat-finite") != std::string::npos);
}

TEST_CASE("oracle and graph commands") {
  const Run none = run("oracle --oracle-rank 4 --oracle-universe 10 -e " + quote("x != 0 && z = x*x && z <= x"));
  CHECK(none.code == 1);
  CHECK(none.out.find("none within bounds") != std::string::npos);
  CHECK(run("oracle -e " + quote("x != 0")).code == 0);
  CHECK(run("oracle --oracle-universe 99 -e " + quote("x != 0")).code == 2);

  const Run dot = run("graph --format dot -e " + quote("x != 0 && z = x*x && z <= x"));
  CHECK(dot.code == 0);
  CHECK(dot.out.find("digraph") != std::string::npos);
  CHECK(dot.out.find("doublecircle") != std::string::npos);
}
