// End-to-end tests driving the installed binary as a subprocess: exit codes,
// output document shape, seeding, determinism, and the documented examples.

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

#ifndef GRIDLAB_CLI_PATH
#error "GRIDLAB_CLI_PATH must point at the CLI binary"
#endif

namespace {

using nlohmann::json;

const std::string kDir = []() {
  std::string d = "/tmp/gridlab_cli_" + std::to_string(::getpid());
  if (std::system(("mkdir -p " + d).c_str()) != 0) std::abort();
  return d;
}();

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

// env_prefix lets tests export GRIDLAB_SEED for one invocation.
CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const std::string out = kDir + "/stdout.txt";
  const std::string err = kDir + "/stderr.txt";
  const std::string cmd =
      env_prefix + std::string(GRIDLAB_CLI_PATH) + " " + args + " >" + out + " 2>" + err;
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace

TEST_CASE("help and argument errors") {
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("dual --help").code == 0);

  CHECK(run_cli("").code == 2);                          // a subcommand is required
  CHECK(run_cli("no_such_command").code == 2);
  CHECK(run_cli("dual --nu uniform --bogus 1").code == 2);
  CHECK(run_cli("dual").code == 2);                      // missing required --nu
  CHECK(run_cli("paths --nu uniform --n x --eps 0.1").code == 2);  // non-numeric

  const CliResult bad = run_cli("lp --a /nonexistent.json --b /nonexistent.json");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("error:") != std::string::npos);
}

TEST_CASE("distance between two measure files") {
  spit(kDir + "/a.json", R"({"type": "atoms", "values": [0.2], "masses": [1.0]})");
  spit(kDir + "/b.json", R"({"type": "atoms", "values": [0.5], "masses": [1.0]})");
  const CliResult r = run_cli("lp --a " + kDir + "/a.json --b " + kDir + "/b.json");
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["config"]["subcommand"] == "lp");
  CHECK(doc["seed"] == "0");
  CHECK(doc.contains("version"));
  CHECK(doc["rho"].get<double>() == doctest::Approx(0.3).epsilon(1e-12));

  // Malformed input fails cleanly.
  spit(kDir + "/broken.json", "{not json");
  CHECK(run_cli("lp --a " + kDir + "/broken.json --b " + kDir + "/b.json").code == 1);
  spit(kDir + "/badtype.json", R"({"type": "nope"})");
  CHECK(run_cli("lp --a " + kDir + "/badtype.json --b " + kDir + "/b.json").code == 1);
}

TEST_CASE("entropy estimates by subcommand") {
  const CliResult r = run_cli("dual --nu uniform --m 1,8 --D 2");
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  REQUIRE(doc["rows"].size() == 2);
  for (const json& row : doc["rows"]) {
    CHECK(row["converged"].get<bool>());
    CHECK(row["entropy_estimate"].get<double>() ==
          doctest::Approx(std::log(2.0)).epsilon(1e-6));
    CHECK(row["tau_star"].size() == row["m"].get<std::size_t>());
  }

  // CSV carries the same data behind '#' comments.
  const CliResult csv = run_cli("dual --nu uniform --m 8 --D 2 --format csv");
  REQUIRE(csv.code == 0);
  CHECK(csv.out.find("# version=") != std::string::npos);
  CHECK(csv.out.find("# subcommand=dual") != std::string::npos);
  CHECK(csv.out.find("# seed=0") != std::string::npos);
  CHECK(csv.out.find("m,entropy_estimate,converged,iterations,grad_norm") != std::string::npos);
  CHECK(csv.out.find("8,0.693147") != std::string::npos);

  // A binned measure file with mismatched --m is rejected.
  spit(kDir + "/nu4.json", R"({"type": "binned", "m": 4, "weights": [0.25, 0.25, 0.25, 0.25]})");
  CHECK(run_cli("dual --nu " + kDir + "/nu4.json --m 8 --D 2").code == 1);
  CHECK(run_cli("dual --nu " + kDir + "/nu4.json --m 4 --D 2").code == 0);
}

TEST_CASE("free energy subcommand") {
  const CliResult r = run_cli("gibbs --tau zero --m 4 --D 2 --n 5000 --seed 3");
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["seed"] == "3");
  CHECK(doc["exact"].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(doc["mc"]["samples"] == 5000);
  CHECK(doc["mc"]["mean"].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // Without --n the Monte Carlo block is null.
  const json plain = json::parse(run_cli("gibbs --tau zero --m 4 --D 2").out);
  CHECK(plain["mc"].is_null());

  // --beta overrides the file's beta; the shift identity fixes the value.
  spit(kDir + "/tau.json", R"({"type": "tau", "m": 2, "values": [0.5, 0.5]})");
  const json b1 = json::parse(run_cli("gibbs --tau " + kDir + "/tau.json --D 2").out);
  CHECK(b1["exact"].get<double>() == doctest::Approx(std::log(2.0) + 0.5).epsilon(1e-12));
  const json b2 = json::parse(run_cli("gibbs --tau " + kDir + "/tau.json --D 2 --beta 2").out);
  CHECK(b2["exact"].get<double>() == doctest::Approx(std::log(2.0) + 1.0).epsilon(1e-12));
}

TEST_CASE("path counts subcommand") {
  const CliResult r = run_cli("paths --nu uniform --D 2 --n 6,8 --m 4 --eps 0.25,1.0 --seed 7");
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  REQUIRE(doc["rows"].size() == 4);  // two n values x two thresholds
  const json& last = doc["rows"][3];
  CHECK(last["n"] == 8);
  CHECK(last["exact"].get<bool>());
  CHECK(last["count"] == "256");  // every path within eps = 1
  CHECK(last["slope"].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // Counts grow with eps at fixed n.
  const auto c0 = std::stoull(doc["rows"][2]["count"].get<std::string>());
  CHECK(c0 <= 256);
}

TEST_CASE("simulation subcommand") {
  const CliResult r =
      run_cli("simulate --strategy greedy --K 4 --D 2 --n 2000 --m 50 --seed 5");
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  REQUIRE(doc["rows"].size() == 1);
  CHECK(doc["rows"][0]["n"] == 2000);
  CHECK(doc["rows"][0]["rho"].get<double>() < 0.05);

  // Builtin table strategies need --K.
  CHECK(run_cli("simulate --strategy greedy --D 2 --n 100").code == 1);

  // Scored builtins run on the continuous model.
  const json vee = json::parse(run_cli("simulate --strategy vee --D 2 --n 2000 --seed 5").out);
  CHECK(vee["rows"][0]["rho"].get<double>() < 0.2);

  // Strategy files load, exact rational entries and all.
  spit(kDir + "/strat.json",
       R"({"type": "table", "K": 2, "D": 2,
           "entries": [[1,1],[0,1], [1,2],[1,2], [1,2],[1,2], [0,1],[1,1]]})");
  const CliResult fr =
      run_cli("simulate --strategy " + kDir + "/strat.json --K 2 --D 2 --n 1000 --seed 5");
  CHECK(fr.code == 0);

  const CliResult mism = run_cli("simulate --strategy max --D 2 --n 100 --format csv");
  CHECK(mism.code == 0);
  CHECK(mism.out.find("n,rho") != std::string::npos);
}

TEST_CASE("discrete model subcommand") {
  const CliResult r = run_cli("discrete --K 3 --D 2");
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["extreme_count"] == 6);
  CHECK(doc["orderings"] == 6);
  CHECK(doc["deterministic_consistent_tables"] == 8);
  CHECK(doc["bijection_to_orderings"].get<bool>());
  CHECK(doc["weight_tuples_base"].get<bool>());
  REQUIRE(doc["extreme_points"].size() == 6);
  for (const json& p : doc["extreme_points"]) {
    CHECK(p["denominator"] == "9");
    if (p["alpha"] == "123") {
      CHECK(p["numerators"] == json::array({"1", "3", "5"}));
    }
  }

  const CliResult csv = run_cli("discrete --K 3 --D 2 --format csv");
  CHECK(csv.out.find("alpha,p1,p2,p3") != std::string::npos);
  CHECK(csv.out.find("123,1/9,3/9,5/9") != std::string::npos);
}

TEST_CASE("seeding and determinism") {
  const std::string cmd = "simulate --strategy max --D 2 --n 500 --seed 11";
  const CliResult a = run_cli(cmd);
  const CliResult b = run_cli(cmd);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);  // byte-identical reruns

  const CliResult c = run_cli("simulate --strategy max --D 2 --n 500 --seed 12");
  CHECK(a.out != c.out);

  // GRIDLAB_SEED fills in when --seed is absent; the flag wins over it.
  const json env_doc =
      json::parse(run_cli("simulate --strategy max --D 2 --n 50", "GRIDLAB_SEED=123 ").out);
  CHECK(env_doc["seed"] == "123");
  const json flag_doc = json::parse(
      run_cli("simulate --strategy max --D 2 --n 50 --seed 7", "GRIDLAB_SEED=123 ").out);
  CHECK(flag_doc["seed"] == "7");
}

TEST_CASE("output redirection") {
  const std::string path = kDir + "/result.json";
  const CliResult r = run_cli("dual --nu sigma_max --m 4 --D 2 --out " + path);
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const json doc = json::parse(slurp(path));
  CHECK(doc["config"]["nu"] == "sigma_max");
  CHECK(doc["rows"][0]["entropy_estimate"].get<double>() > 0.0);
}
