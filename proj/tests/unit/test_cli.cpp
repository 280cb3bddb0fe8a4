// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "beamform");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = beamform::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("run writes a CSV and metadata sidecar") {
  const auto r = run({"run", "--scenario", "fig1a", "--trials", "3", "--out", "cli_run.csv"});
  REQUIRE(r.code == 0);
  const auto csv = slurp("cli_run.csv");
  CHECK(count_lines(csv) == 501);
  CHECK(csv.rfind("snapshot,CMV-SG_dB,CCM-SG_dB,CMV-RLS_dB,CCM-RLS_dB,CMV-AVF_dB,CCM-AVF_dB,MVDR_dB\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  const auto meta = slurp("cli_run.csv.meta.json");
  CHECK(meta.find("\"trials\": 3") != std::string::npos);
  CHECK(r.err.find("CCM-AVF") != std::string::npos);
}

TEST_CASE("run to stdout, quiet") {
  const auto r = run({"run", "--scenario", "fig1b", "--trials", "1", "--quiet", "--seed", "5"});
  REQUIRE(r.code == 0);
  CHECK(count_lines(r.out) == 501);
  CHECK(r.err.empty());
}

TEST_CASE("sweep-k emits one row per K") {
  const auto r = run({"sweep-k", "--scenario", "fig2", "--trials", "1", "--k", "1,3", "--quiet"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("K,", 0) == 0);
  CHECK(count_lines(r.out) == 3);
}

TEST_CASE("beampattern") {
  const auto r = run({"beampattern", "--scenario", "fig1a", "--trials", "1", "--step", "10", "--quiet"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("doa_deg,", 0) == 0);
  CHECK(count_lines(r.out) == 18);
}

TEST_CASE("list-scenarios") {
  const auto r = run({"list-scenarios"});
  CHECK(r.code == 0);
  CHECK(r.out.find("fig1a") != std::string::npos);
  CHECK(r.out.find("fig1b") != std::string::npos);
  CHECK(r.out.find("fig2") != std::string::npos);
}

TEST_CASE("usage errors exit with 2 and print help") {
  auto r = run({"frobnicate"});
  CHECK(r.code == 2);
  CHECK(r.err.find("run") != std::string::npos);
  CHECK(run({}).code == 2);
  CHECK(run({"run"}).code == 2);
  CHECK(run({"run", "--scenario", "fig1a", "--trials", "0"}).code == 2);
  CHECK(run({"run", "--scenario", "fig1a", "--bogus"}).code == 2);
}

TEST_CASE("bad configuration exits with 1") {
  auto r = run({"run", "--scenario", "missing-file.cfg", "--quiet"});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error:", 0) == 0);
  {
    std::ofstream f("cli_bad.cfg");
    f << "num_sensors = -3\n";
  }
  CHECK(run({"run", "--scenario", "cli_bad.cfg", "--quiet"}).code == 1);
  CHECK(run({"run", "--scenario", "fig1a", "--trials", "1", "--out", "/no/such/dir/x.csv", "--quiet"}).code == 1);
}

TEST_CASE("help exits with 0") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("sweep-k") != std::string::npos);
}
