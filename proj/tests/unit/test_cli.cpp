// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "srkhs/cli.hpp"
#include "srkhs/config.hpp"
#include "srkhs/error.hpp"

using namespace srkhs;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "srkhs");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::current_path() / ("cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::set<std::string> listing(const fs::path& dir) {
  std::set<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.insert(e.path().filename().string());
  return names;
}

}  // namespace

TEST_CASE("config round-trip") {
  const auto c = Config::parse("schema = 1\n# comment\nkernel = stable-spline\nalpha = 0.9\n\ngrid = 10:50:10\n");
  CHECK(Config::parse(c.serialize()) == c);
  CHECK(c.serialize().rfind("schema = 1\n", 0) == 0);
  CHECK(c.get_double("alpha", 0.0) == 0.9);
  CHECK(c.get_size("missing", 7) == 7);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(Config::parse("kernel = gaussian\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("schema = 9\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("schema = 1\nalpha = 1\nalpha = 2\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("schema = 1\nno equals sign\n"), ConfigError);
  const auto c = Config::parse("schema = 1\nbogus_key = 3\n");
  const std::string_view allowed[] = {"schema"};
  try {
    c.require_known(allowed);
    FAIL("expected an unknown-key error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
  }
}

TEST_CASE("grid and index parsers") {
  CHECK(parse_grid("200:1000:200", "grid") == std::vector<std::size_t>{200, 400, 600, 800, 1000});
  CHECK(parse_grid("5,10,40", "grid") == std::vector<std::size_t>{5, 10, 40});
  CHECK_THROWS_AS(parse_grid("10,5", "grid"), ConfigError);
  CHECK_THROWS_AS(parse_grid("a:b", "grid"), ConfigError);
  CHECK(parse_index_set("1-5,100", "track") == std::vector<std::size_t>{1, 2, 3, 4, 5, 100});
  CHECK_THROWS_AS(parse_index_set("0-2", "track"), ConfigError);
  CHECK(parse_double_list("1e-3, 2.5", "x") == std::vector<double>{1e-3, 2.5});
  CHECK_THROWS_AS(parse_size("-3", "n"), ConfigError);
}

TEST_CASE("kernel and model from config") {
  auto c = Config::parse("schema = 1\nkernel = rank-one\nv = power:-1\n");
  CHECK(kernel_from_config(c).describe() == "rank-one(v=power:-1)");
  c.set("kernel", "nonsense");
  CHECK_THROWS_AS(kernel_from_config(c), ConfigError);
  const auto m = model_from_config(Config::parse("schema = 1\nbasis = canonical\ncount = 4\nwindow = 4\nlambda = geometric:0.5\n"));
  CHECK(m.basis.size() == 4);
  CHECK(m.eigenvalues.to_string() == "geometric:0.5");
}

TEST_CASE("exit codes") {
  CHECK(run_cli({"--help"}).code == 0);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  const auto dir = fresh_dir("codes");
  CHECK(run_cli({"--output-dir", dir.string(), "classify", "--kernel", "cubic"}).code == 2);
  CHECK(run_cli({"--output-dir", dir.string(), "identify", "--n", "50"}).code == 2);
  CHECK(run_cli({"--output-dir", dir.string(), "--set", "unknown=1", "classify"}).code == 2);
  CHECK(run_cli({"--output-dir", dir.string(), "spectrum", "--grid", "4,8", "--track", "6"}).code == 2);
  CHECK(run_cli({"--output-dir", dir.string(), "spectrum", "--kernel", "translation-invariant", "--h",
                 "literal:1,-1,-1", "--grid", "4,8", "--track", "1"})
            .code == 2);
  CHECK(run_cli({"--config", (dir / "absent.txt").string(), "classify"}).code == 2);
}

TEST_CASE("classify writes its report into the output directory only") {
  const auto dir = fresh_dir("classify");
  const auto before = listing(fs::current_path());
  const auto r = run_cli({"--output-dir", dir.string(), "classify", "--kernel", "gaussian"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "AnalyticallyUnstable");
  CHECK(listing(dir) == std::set<std::string>{"config.txt", "report.json"});
  auto after = listing(fs::current_path());
  after.erase(dir.filename().string());
  CHECK(after == before);
  CHECK(Config::parse(slurp(dir / "config.txt")).get_string("kernel", "") == "gaussian");
}

TEST_CASE("runs are byte-identical") {
  const auto a = fresh_dir("det_a");
  const auto b = fresh_dir("det_b");
  for (const auto& dir : {a, b}) {
    REQUIRE(run_cli({"--output-dir", dir.string(), "--seed", "5", "identify", "--n", "80", "--window", "60",
                     "--set", "d_grid=5,10,full", "--set", "ls_max_order=8", "--set", "gamma_grid=0.01,100,5"})
                .code == 0);
    REQUIRE(run_cli({"--output-dir", dir.string(), "--threads", dir == a ? "1" : "3", "spectrum", "--grid",
                     "10:40:10", "--track", "1-3"})
                .code == 0);
  }
  for (const char* f : {"identify.json", "estimators.csv", "sweep.csv", "impulse_responses.csv",
                        "eigenvalue_paths.csv", "discrepancy.csv", "summary.json"}) {
    CAPTURE(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }
}

TEST_CASE("config file and flags combine") {
  const auto dir = fresh_dir("config");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "in.txt");
    cfg << "schema = 1\ncommand = reconstruct\nkernel = stable-spline\nalpha = 0.9\nd = 60\n";
  }
  const auto r = run_cli({"--config", (dir / "in.txt").string(), "--output-dir", (dir / "out").string(),
                          "reconstruct", "--ranks", "0,5,60"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["d"] == 60);
  CHECK(j["trace"]["relative_error"].get<double>() < 1e-12);
  CHECK(run_cli({"--config", (dir / "in.txt").string(), "--output-dir", (dir / "out").string(), "classify"})
            .code == 2);
}

TEST_CASE("synth examples") {
  const auto dir = fresh_dir("synth");
  const auto r = run_cli({"--output-dir", dir.string(), "synth", "--basis", "laguerre", "--pole", "0.8", "--count",
                          "32", "--window", "1024", "--lambda", "power:4"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["sufficient"]["certification"] == "Certified");
  CHECK(j["l1_profile"]["linear_constant"].get<double>() == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(j["contradiction"] == false);
  CHECK(run_cli({"--output-dir", dir.string(), "synth", "--basis", "laguerre", "--pole", "0.9", "--count", "5",
                 "--window", "10"})
            .code == 2);
}

TEST_CASE("noiseless identification") {
  const auto dir = fresh_dir("identify");
  const auto r = run_cli({"--output-dir", dir.string(), "--seed", "3", "identify", "--n", "300", "--window", "150",
                          "--sigma", "0", "--gamma", "0.001", "--set", "d_grid=10,full"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["equivalence_gap"].get<double>() <= 1e-8);
  for (const auto& e : j["estimators"]) {
    CAPTURE(e["estimator"].get<std::string>());
    CHECK(e["fit_percent"].get<double>() >= 99.0);
  }
}

TEST_CASE("installed tool smoke test") {
  const char* tool = std::getenv("SRKHS_TOOL");
  if (!tool) return;
  const auto dir = fresh_dir("tool");
  const std::string cmd = std::string("\"") + tool + "\" --output-dir \"" + dir.string() +
                          "\" classify --kernel diagonal --g power:-2 > \"" + dir.string() + ".stdout\"";
  CHECK(std::system(cmd.c_str()) == 0);
  const auto j = nlohmann::json::parse(slurp(dir.string() + ".stdout"));
  CHECK(j["verdict"] == "AnalyticallyStable");
  fs::remove(dir.string() + ".stdout");
  const std::string bad = std::string("\"") + tool + "\" classify --kernel cubic 2>/dev/null >/dev/null";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
