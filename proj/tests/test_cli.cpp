#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dvfs/cli.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = dvfs::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "dvfs_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

const std::string kNet = dvfs::test::data_path("fixture_network.json");
const std::string kCal = dvfs::test::data_path("calibration_default.json");

}  // namespace

TEST_CASE("explore-clocks emits one row per PLL tuple") {
  const auto dir = scratch("explore");
  const auto r = run({"explore-clocks", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  const auto rows = lines(slurp(dir / "clocks.csv"));
  REQUIRE(rows.size() == 15);
  CHECK(rows[0] == "source,hse_mhz,pllm,plln,pllp,sysclk_mhz,vco_mhz,power_mw,min_power");
  CHECK(rows[1].rfind("pll,50,50,75,2,37.500,75.000,", 0) == 0);
}

TEST_CASE("compare produces strategies x slacks") {
  const auto dir = scratch("compare");
  const auto r = run({"compare", "--network", kNet, "--calibration", kCal, "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  const auto rows = lines(slurp(dir / "comparison.csv"));
  REQUIRE(rows.size() == 10);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].rfind("planned", 0) != 0) continue;
    std::istringstream cells(rows[i]);
    std::string name, energy, normalized;
    std::getline(cells, name, ',');
    std::getline(cells, energy, ',');
    std::getline(cells, normalized, ',');
    CHECK(std::stod(normalized) <= 1.0);
  }
  CHECK(fs::exists(dir / "manifest.json"));

  const auto one = run({"compare", "--network", kNet, "--slack", "50", "--out-dir", dir.string(), "--out", "s50.csv"});
  REQUIRE(one.code == 0);
  CHECK(lines(slurp(dir / "s50.csv")).size() == 4);
}

TEST_CASE("optimize then simulate reproduces the stored report") {
  const auto dir = scratch("roundtrip");
  const auto r = run({"optimize", "--network", kNet, "--qos-slack-pct", "30", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(slurp(dir / "schedule.json"));
  CHECK(doc["feasible"].get<bool>());
  const auto s = run({"simulate", "--schedule", (dir / "schedule.json").string(), "--out-dir", dir.string()});
  REQUIRE(s.code == 0);
  CHECK(json::parse(slurp(dir / "report.json")) == doc["report"]);
}

TEST_CASE("optimize from a measured profile file") {
  const auto dir = scratch("measured");
  const auto r = run({"optimize", "--profiles", dvfs::test::data_path("sample_profiles.jsonl"), "--qos-us", "90000",
                      "--out-dir", dir.string()});
  CHECK(r.code == 0);
  const auto tight = run({"optimize", "--profiles", dvfs::test::data_path("sample_profiles.jsonl"), "--qos-us", "100",
                          "--out-dir", dir.string()});
  CHECK(tight.code == dvfs::cli::kExitInfeasible);
  CHECK(tight.out.find("infeasible") != std::string::npos);
}

TEST_CASE("synthetic runs are byte-identical for a fixed seed") {
  const auto a = scratch("seed_a");
  const auto b = scratch("seed_b");
  const auto c = scratch("seed_c");
  for (const auto& [dir, seed] : {std::pair{a, "7"}, std::pair{b, "7"}, std::pair{c, "8"}})
    REQUIRE(run({"synth-profiles", "--network", kNet, "--seed", seed, "--jitter-pct", "5", "--out-dir", dir.string()})
                .code == 0);
  CHECK(slurp(a / "profiles.jsonl") == slurp(b / "profiles.jsonl"));
  CHECK(slurp(a / "profiles.jsonl") != slurp(c / "profiles.jsonl"));
  // The synthesized file feeds back in as a measured source.
  const auto p = run({"pareto", "--profiles", (a / "profiles.jsonl").string(), "--out-dir", a.string()});
  CHECK(p.code == 0);
  CHECK(lines(p.out).front() == "layer,g,hfo_mhz,latency_us,energy_uj");
}

TEST_CASE("ingest summarizes layers") {
  const auto dir = scratch("ingest");
  const auto r = run({"ingest", "--profiles", dvfs::test::data_path("sample_profiles.jsonl"), "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out).size() == 3);
  CHECK(fs::exists(dir / "profiles.normalized.jsonl"));
}

TEST_CASE("input validation failures exit with 3") {
  const auto dir = scratch("bad");
  CHECK(run({"optimize", "--network", kNet, "--out-dir", dir.string()}).code == dvfs::cli::kExitInvalidInput);
  CHECK(run({"optimize", "--network", "/nonexistent.json", "--qos-us", "10"}).code == dvfs::cli::kExitInvalidInput);
  CHECK(run({"pareto", "--network", kNet, "--profiles", dvfs::test::data_path("sample_profiles.jsonl")}).code ==
        dvfs::cli::kExitInvalidInput);
  CHECK(run({"frobnicate"}).code == dvfs::cli::kExitInvalidInput);

  std::ofstream(dir / "bad.jsonl") << "{\"layer\":0,\"kind\":\"dw\",\"g\":5}\n";
  const auto r = run({"ingest", "--profiles", (dir / "bad.jsonl").string(), "--out-dir", dir.string()});
  CHECK(r.code == dvfs::cli::kExitInvalidInput);
  CHECK(r.err.find("line 1") != std::string::npos);

  std::ofstream(dir / "cal.json") << "{\"static_mw\": 1}";
  CHECK(run({"pareto", "--network", kNet, "--calibration", (dir / "cal.json").string()}).code ==
        dvfs::cli::kExitInvalidInput);
}

TEST_CASE("help exits cleanly") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("optimize") != std::string::npos);
}
