// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "hoc/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("hoc_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_config(const std::string& name, const json& j) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << j.dump();
  return p.string();
}

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = hoc::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const json kRademacherQuadratic = {
    {"source", {{"rademacher", 4}}},
    {"function", {{"nvars", 4}, {"monomials", {{{"exps", {1, 1, 0, 0}}, {"coef", 1.0}}, {{"exps", {0, 0, 1, 1}}, {"coef", 1.0}}}}}},
    {"check", "tail"},
    {"setting", {{"tag", "independent_bounded"}, {"d", 2}}},
    {"grid", {{"start", 0}, {"stop", 3}, {"step", 0.5}}}};

}  // namespace

TEST_CASE("norms prints csv rows") {
  const json c = {{"function", {{"nvars", 2}, {"monomials", {{{"exps", {1, 1}}, {"coef", 2.0}}}}}},
                  {"orders", {1, 2}},
                  {"points", {{1.0, 3.0}}}};
  const Run r = run({"norms", "--config", write_config("n.json", c), "--format", "csv"});
  CHECK(r.code == hoc::kExitOk);
  CHECK(r.out.rfind("point,order,hs,op,converged\n", 0) == 0);
  const auto row = r.out.find("0,2,2.8284271247461903,");
  REQUIRE(row != std::string::npos);
  CHECK(std::stod(r.out.substr(row + 23)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("norms rejects q outside [1,2]") {
  const json c = {{"tensor", {{"order", 1}, {"dim", 2}, {"entries", {1.0, 2.0}}}}, {"q", 3.0}};
  CHECK(run({"norms", "--config", write_config("q.json", c)}).code == hoc::kExitConfigError);
}

TEST_CASE("bound emits a curve and flags degenerate levels") {
  json c = {{"kind", "tail"}, {"setting", {{"tag", "gaussian"}, {"d", 1}}}, {"levels", {1.0}}, {"grid", {0.0, 1.0, 2.0}}};
  Run r = run({"bound", "--config", write_config("b.json", c), "--format", "csv"});
  CHECK(r.code == hoc::kExitOk);
  CHECK(r.out.rfind("t,bound\n0,1\n", 0) == 0);
  c["levels"] = {0.0};
  r = run({"bound", "--config", write_config("b0.json", c)});
  CHECK(r.code == hoc::kExitCheckFailed);
}

TEST_CASE("sample is reproducible and writes binary files") {
  const json c = {{"measure", {{"kind", "stiefel"}, {"n", 4}, {"k", 2}}}, {"samples", 5}, {"format", "csv"}};
  const std::string p = write_config("s.json", c);
  const Run a = run({"sample", "--config", p, "--seed", "3"});
  const Run b = run({"sample", "--config", p, "--seed", "3"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != run({"sample", "--config", p, "--seed", "4"}).out);
  const std::string bin = (scratch() / "s.bin").string();
  json cb = c;
  cb["format"] = "binary";
  CHECK(run({"sample", "--config", write_config("sb.json", cb), "--out", bin}).code == 0);
  std::ifstream in(bin, std::ios::binary);
  char magic[8];
  in.read(magic, 8);
  CHECK(std::string(magic, 8) == "CLABSAMP");
  CHECK(run({"sample", "--config", write_config("sb2.json", cb)}).code == hoc::kExitConfigError);
}

TEST_CASE("verify passes on an exhaustive check and reports json") {
  const Run r = run({"verify", "--config", write_config("v.json", kRademacherQuadratic)});
  CHECK(r.code == hoc::kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["schema_version"] == "1");
  CHECK(j["pass"] == true);
  CHECK(j["levels"].size() == 2);
}

TEST_CASE("verify fails when the claimed levels are too small") {
  json c = kRademacherQuadratic;
  c["levels"] = {1e-3, 1e-3};
  const Run r = run({"verify", "--config", write_config("vf.json", c)});
  CHECK(r.code == hoc::kExitCheckFailed);
}

TEST_CASE("verify monte carlo with automatic levels") {
  const json c = {{"source", {{"measure", {{"kind", "gaussian"}, {"n", 3}}}}},
                  {"function", {{"nvars", 3}, {"monomials", {{{"exps", {1, 0, 0}}, {"coef", 1.0}}, {{"exps", {0, 1, 1}}, {"coef", 0.5}}}}}},
                  {"check", "tail"},
                  {"setting", {{"tag", "gaussian"}, {"d", 2}}},
                  {"grid", {0.0, 1.0, 2.0, 4.0}},
                  {"samples", 20000}};
  const Run r = run({"verify", "--config", write_config("vm.json", c), "--seed", "5", "--delta", "0.05"});
  CHECK(r.code == hoc::kExitOk);
  CHECK(json::parse(r.out)["report"]["delta"] == 0.05);
}

TEST_CASE("verify rejects delta outside (0,1)") {
  const Run r = run({"verify", "--config", write_config("vd.json", kRademacherQuadratic), "--delta", "1.5"});
  CHECK(r.code == hoc::kExitConfigError);
  CHECK(r.err.find("delta") != std::string::npos);
}

TEST_CASE("discrete profile of independent spins") {
  const json c = {{"ising", {{"n", 2}, {"edges", {{0, 1, 0.7}}}, {"beta", 0.0}}}, {"operations", {"profile"}}};
  const Run r = run({"discrete", "--config", write_config("d.json", c)});
  CHECK(r.code == hoc::kExitOk);
  const json j = json::parse(r.out);
  for (const auto& row : j["profile"]["J"])
    for (const auto& v : row) CHECK(std::abs(v.get<double>()) < 1e-15);
  CHECK(run({"discrete", "--config", write_config("d.json", c), "--format", "csv"}).code == hoc::kExitConfigError);
}

TEST_CASE("config errors") {
  CHECK(run({"verify", "--config", (scratch() / "missing.json").string()}).code == hoc::kExitConfigError);
  const std::string bad = (scratch() / "bad.json").string();
  std::ofstream(bad) << "{not json";
  CHECK(run({"norms", "--config", bad}).code == hoc::kExitConfigError);
  json c = kRademacherQuadratic;
  c["unexpected"] = 1;
  CHECK(run({"verify", "--config", write_config("u.json", c)}).code == hoc::kExitConfigError);
  CHECK(run({"frobnicate"}).code == hoc::kExitConfigError);
  CHECK(run({}).code == hoc::kExitConfigError);
}

TEST_CASE("installed binary exit codes") {
  const std::string cfg = write_config("bin.json", kRademacherQuadratic);
  const std::string cmd = std::string(HOC_BINARY) + " verify --config " + cfg + " > /dev/null";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  const std::string bad = std::string(HOC_BINARY) + " verify --config " + cfg + " --delta 0 2> /dev/null";
  CHECK(WEXITSTATUS(std::system(bad.c_str())) == 2);
}
