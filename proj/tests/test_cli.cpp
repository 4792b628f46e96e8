#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "starcore/cli.hpp"
#include "starcore/instance.hpp"
#include "starcore/model.hpp"

using namespace starcore;
using nlohmann::json;

namespace {

struct CaptureCout {
  std::stringstream ss;
  std::streambuf* old;
  CaptureCout() : old(std::cout.rdbuf(ss.rdbuf())) {}
  ~CaptureCout() { std::cout.rdbuf(old); }
};

int run_quiet(const std::vector<std::string>& args, std::string* out = nullptr) {
  CaptureCout cap;
  int rc = run_cli(args);
  if (out) *out = cap.ss.str();
  return rc;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string tmp_path(const std::string& name) {
  return std::string("/tmp/starcore_cli_") + name;
}

}  // namespace

TEST_CASE("exit codes: parse errors and missing settings give 2") {
  CHECK(run_quiet({"thresholds", "--model", "2col", "--k", "3"}) == 0);
  CHECK(run_quiet({"thresholds", "--k", "3"}) == 2);         // no model
  CHECK(run_quiet({"thresholds", "--model", "2col"}) == 2);  // no k
  CHECK(run_quiet({"nonsense"}) == 2);
  CHECK(run_quiet({"thresholds", "--model", "2col", "--k", "3",
                   "--bogus-flag"}) == 2);
  CHECK(run_quiet({"core-scan", "--model", "2col", "--k", "3", "--n", "100",
                   "--r", "3.0", "--trials", "1"}) == 2);  // no seed
  CHECK(run_quiet({"core-scan", "--model", "2col", "--k", "3", "--n", "100",
                   "--r", "3.0", "--M", "300", "--trials", "1", "--seed",
                   "1"}) == 2);  // r and M together
  CHECK(run_quiet({"sample", "--model", "2col", "--k", "3", "--n", "10",
                   "--M", "5", "--seed", "1"}) == 2);  // sample needs --out
}

TEST_CASE("exit codes: scale cap gives 3, sampling failure gives 4") {
  CHECK(run_quiet({"freeze-scan", "--model", "2col", "--k", "3", "--n", "40",
                   "--M", "60", "--ell", "1", "--trials", "1", "--seed",
                   "1"}) == 3);  // 40 > enumeration cap
  // dense instances on 5 variables are unsatisfiable; the retry budget runs
  // out and the failure surfaces as 4
  CHECK(run_quiet({"sample", "--model", "2col", "--k", "3", "--n", "5", "--M",
                   "200", "--seed", "1", "--uniform-small", "--out",
                   tmp_path("never.txt")}) == 4);
}

TEST_CASE("help exits 0") {
  CHECK(run_quiet({"--help"}) == 0);
  CHECK(run_quiet({"core-scan", "--help"}) == 0);
}

TEST_CASE("thresholds --json reports every constant") {
  std::string out;
  REQUIRE(run_quiet({"thresholds", "--model", "2col", "--k", "3", "--r",
                     "3.0", "--json"},
                    &out) == 0);
  json j = json::parse(out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["command"] == "thresholds");
  for (const char* key : {"alpha_k", "x1", "xi", "omega_f", "omega_p", "r_f",
                          "r_p", "r_p_lower_bound", "r_sat_reference"})
    CHECK(j["report"].contains(key));
  CHECK(j["report"]["xi"].get<double>() == doctest::Approx(1.0));
  CHECK(j["report"]["r_p"].get<double>() == doctest::Approx(1.5));
  REQUIRE(j["densities"].size() == 1);
  CHECK(j["densities"][0]["predicted_survival"].get<double>() ==
        doctest::Approx(0.921891).epsilon(1e-4));
}

TEST_CASE("thresholds: spectrum path covers arities past the table cap") {
  std::string out;
  REQUIRE(run_quiet(
              {"thresholds", "--model", "2col", "--k", "30", "--json"},
              &out) == 0);
  json j = json::parse(out);
  CHECK(j["report"]["r_f"].get<double>() < j["report"]["r_p"].get<double>());
}

TEST_CASE("core-scan: byte-identical CSV across reruns, json summary sane") {
  auto csv = tmp_path("core.csv");
  std::vector<std::string> args{"core-scan", "--model", "2col", "--k",    "3",
                                "--n",       "4000",    "--r", "3.0",
                                "--trials",  "3",       "--seed", "42",
                                "--jobs",    "2",       "--out", csv};
  std::string out1;
  REQUIRE(run_quiet(args, &out1) == 0);
  std::string first = slurp(csv);
  CHECK(first.rfind("# schema_version=1\n", 0) == 0);
  CHECK(first.find("trial,seed,n,k,r,M,essential_edges,alpha_hat,"
                   "core_vertices,core_edges,core_lplus,h1_plus,h1_minus,"
                   "rounds,rho_pred,lambda_pred,branching_ratio") !=
        std::string::npos);

  args[args.size() - 3] = "4";  // different job count, same stream
  REQUIRE(run_quiet(args) == 0);
  CHECK(slurp(csv) == first);

  std::string jout;
  std::vector<std::string> jargs(args.begin(), args.end());
  jargs.push_back("--json");
  REQUIRE(run_quiet(jargs, &jout) == 0);
  json j = json::parse(jout);
  CHECK(j["aggregates"]["core_fraction"]["mean"].get<double>() ==
        doctest::Approx(0.9219).epsilon(0.02));
  CHECK(j["predictions"]["rho"].get<double>() ==
        doctest::Approx(0.921891).epsilon(1e-4));
  CHECK(j["timings"].contains("wall_seconds"));
}

TEST_CASE("freeze-scan: CSV layout and rerun stability") {
  auto csv = tmp_path("freeze.csv");
  std::vector<std::string> args{
      "freeze-scan", "--model", "2col", "--k",     "3",  "--n",   "10",
      "--M",         "15",      "--ell", "1,2",    "--trials", "4",
      "--seed",      "7",       "--jobs", "2",     "--out", csv};
  REQUIRE(run_quiet(args) == 0);
  std::string first = slurp(csv);
  CHECK(first.find("trial,variable,in_core,star_depth,frozen_at_1,"
                   "frozen_at_2,near_short_cycle") != std::string::npos);
  // 4 trials x 10 variables + schema line + header
  int lines = 0;
  for (char c : first) lines += c == '\n';
  CHECK(lines == 42);
  REQUIRE(run_quiet(args) == 0);
  CHECK(slurp(csv) == first);
}

TEST_CASE("greedy-solve: rerun stability and summary") {
  auto csv = tmp_path("greedy.csv");
  std::vector<std::string> args{
      "greedy-solve", "--model", "2col", "--k",      "3",  "--n",   "400",
      "--r",          "1.0",     "--trials", "5",    "--seed", "11",
      "--jobs",       "2",       "--out",   csv};
  std::string out;
  REQUIRE(run_quiet(args, &out) == 0);
  std::string first = slurp(csv);
  CHECK(first.find("trial,seed,n,k,target_M,reached_M,success,repairs,"
                   "repair_flips,walk_expansions") != std::string::npos);
  REQUIRE(run_quiet(args) == 0);
  CHECK(slurp(csv) == first);

  std::string jout;
  args.push_back("--json");
  REQUIRE(run_quiet(args, &jout) == 0);
  json j = json::parse(jout);
  CHECK(j["aggregates"]["success_rate"]["mean"].get<double>() > 0.5);
}

TEST_CASE("sample: instance file round-trips and reruns identically") {
  auto path = tmp_path("inst.txt");
  std::vector<std::string> args{"sample", "--model", "2col", "--k", "3",
                                "--n",    "12",      "--M",  "20",  "--seed",
                                "3",      "--out",   path};
  REQUIRE(run_quiet(args) == 0);
  std::string first = slurp(path);
  REQUIRE(run_quiet(args) == 0);
  CHECK(slurp(path) == first);

  std::ifstream in(path);
  auto parsed = read_instance(in);
  CHECK(parsed.model_name == "2col");
  CHECK(parsed.instance.n == 12);
  CHECK(parsed.instance.constraints.size() == 20);
  REQUIRE(parsed.sigma.has_value());
  auto m = resolve_model("2col", 3);
  CHECK(satisfies(m, parsed.instance, *parsed.sigma));

  std::ostringstream rewrite;
  write_instance(rewrite, parsed.instance, parsed.model_name,
                 &*parsed.sigma);
  CHECK(rewrite.str() == first);

  // uniform-small mode also emits a true solution
  std::vector<std::string> uargs{"sample", "--model", "2col",   "--k", "3",
                                 "--n",    "10",      "--M",    "12",
                                 "--seed", "9",       "--out",  path,
                                 "--uniform-small"};
  REQUIRE(run_quiet(uargs) == 0);
  std::ifstream uin(path);
  auto up = read_instance(uin);
  REQUIRE(up.sigma.has_value());
  CHECK(satisfies(m, up.instance, *up.sigma));
}

TEST_CASE("config file supplies settings; flags override it") {
  auto cfg = tmp_path("cfg.json");
  {
    std::ofstream f(cfg);
    f << R"({"model":"2col","k":3,"n":1500,"r":3.0,"trials":2,"seed":5})";
  }
  auto csv_a = tmp_path("cfg_a.csv");
  std::string out;
  REQUIRE(run_quiet({"core-scan", "--config", cfg, "--out", csv_a, "--json"},
                    &out) == 0);
  json j = json::parse(out);
  CHECK(j["config"]["n"] == 1500);
  CHECK(j["config"]["trials"] == 2);

  // flag wins over the file
  REQUIRE(run_quiet({"core-scan", "--config", cfg, "--n", "800", "--out",
                     csv_a, "--json"},
                    &out) == 0);
  j = json::parse(out);
  CHECK(j["config"]["n"] == 800);

  // file with both r and M is ambiguous
  auto cfg2 = tmp_path("cfg2.json");
  {
    std::ofstream f(cfg2);
    f << R"({"model":"2col","k":3,"n":100,"r":3.0,"M":300,"seed":5})";
  }
  CHECK(run_quiet({"core-scan", "--config", cfg2}) == 2);
  // but a flag r beats a file M without conflict
  CHECK(run_quiet({"core-scan", "--config", cfg2, "--r", "2.0"}) == 0);

  CHECK(run_quiet({"core-scan", "--config", tmp_path("absent.json")}) == 2);
  auto broken = tmp_path("broken.json");
  {
    std::ofstream f(broken);
    f << "{not json";
  }
  CHECK(run_quiet({"core-scan", "--config", broken}) == 2);
}

TEST_CASE("M flag equals the rounded r route") {
  auto csv_r = tmp_path("by_r.csv");
  auto csv_m = tmp_path("by_m.csv");
  REQUIRE(run_quiet({"core-scan", "--model", "2col", "--k", "3", "--n", "500",
                     "--r", "3.0", "--trials", "2", "--seed", "21", "--out",
                     csv_r}) == 0);
  REQUIRE(run_quiet({"core-scan", "--model", "2col", "--k", "3", "--n", "500",
                     "--M", "1500", "--trials", "2", "--seed", "21", "--out",
                     csv_m}) == 0);
  CHECK(slurp(csv_r) == slurp(csv_m));
}
