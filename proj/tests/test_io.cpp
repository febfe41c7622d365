#include <doctest.h>

#include <random>
#include <sstream>

#include "dvfs/errors.hpp"
#include "dvfs/io.hpp"
#include "dvfs/pipeline.hpp"
#include "support.hpp"

using namespace dvfs;
using json = nlohmann::json;

TEST_CASE("shipped calibration matches the built-in defaults") {
  const auto c = load_calibration(test::data_path("calibration_default.json"));
  CHECK(to_json(c) == to_json(Calibration{}));
}

TEST_CASE("calibration validation") {
  auto j = to_json(Calibration{});
  j.erase("gated_idle_mw");
  CHECK_THROWS_AS(calibration_from_json(j), ParseError);
  j = to_json(Calibration{});
  j["static_mw"] = -2.0;
  CHECK_THROWS_AS(calibration_from_json(j), ParseError);
  j = to_json(Calibration{});
  j["to_hse_us"] = 500.0;
  CHECK_THROWS_AS(calibration_from_json(j), InvalidConfig);
  j = to_json(Calibration{});
  j["switch_power_mw"] = "lots";
  CHECK_THROWS_AS(calibration_from_json(j), ParseError);
}

TEST_CASE("fixture network loads") {
  const auto net = load_network(test::data_path("fixture_network.json"));
  REQUIRE(net.size() == 20);
  int dw = 0;
  int pw = 0;
  for (const auto& l : net) {
    dw += l.kind == LayerKind::Depthwise;
    pw += l.kind == LayerKind::Pointwise;
  }
  CHECK(dw == 9);
  CHECK(pw == 9);
  CHECK(network_from_json(json::array({to_json(net[3])}))[0].overhead.factor == net[3].overhead.factor);
}

TEST_CASE("network validation") {
  CHECK_THROWS_AS(network_from_json(json::object()), ParseError);
  CHECK_THROWS_AS(network_from_json(json::array()), ParseError);
  auto l = to_json(LayerSpec{0, LayerKind::Depthwise, 8, {4, 4}, {3, 3}, 1e5, 1e5, {}});
  auto bad = l;
  bad["kind"] = "conv";
  CHECK_THROWS_AS(network_from_json(json::array({bad})), ParseError);
  bad = l;
  bad["mem_cycles"] = 0;
  CHECK_THROWS_AS(network_from_json(json::array({bad})), ParseError);
  bad = l;
  bad["dae_overhead"] = {{"3", 1.0}};
  CHECK_THROWS_AS(network_from_json(json::array({bad})), ParseError);
  CHECK_THROWS_AS(network_from_json(json::array({l, l})), ParseError);
}

TEST_CASE("synthesized profiles survive a write/ingest round trip") {
  const auto profiles = synthesize_profiles(load_network(test::data_path("fixture_network.json")), Calibration{});
  std::stringstream text;
  write_profiles(text, profiles);
  const auto back = ingest_profiles(text);
  REQUIRE(back.size() == profiles.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].kind == profiles[i].kind);
    CHECK(back[i].points == profiles[i].points);
  }
}

TEST_CASE("schedule JSON round trip") {
  std::mt19937_64 rng(4);
  const auto profiles = synthesize_profiles(load_network(test::data_path("fixture_network.json")), Calibration{});
  for (int trial = 0; trial < 20; ++trial) {
    Schedule s;
    s.lfo = ClockConfig::hse_direct(50);
    s.initial_config = ClockConfig::pll(50, 25, 216);
    for (const auto& p : profiles) {
      std::uniform_int_distribution<std::size_t> pick(0, p.points.size() - 1);
      s.entries.push_back(p.points[pick(rng)]);
    }
    const auto back = schedule_from_json(json::parse(to_json(s).dump()));
    CHECK(back.entries == s.entries);
    CHECK(back.lfo == s.lfo);
    CHECK(back.initial_config == s.initial_config);
  }
}

TEST_CASE("CSV writers") {
  ParetoSet f{3, {test::point(10, 5, 0, 216, 3), test::point(12.5, 4.25, 8, 75, 3)}};
  f.points[1].hfo = ClockConfig::pll(50, 50, 75);
  std::ostringstream out;
  write_pareto_csv(out, std::span<const ParetoSet>(&f, 1));
  CHECK(out.str() ==
        "layer,g,hfo_mhz,latency_us,energy_uj\n"
        "3,0,216.000,10.000000,5.000000\n"
        "3,8,37.500,12.500000,4.250000\n");

  std::ostringstream cmp;
  const std::vector<ComparisonRow> rows{{"baseline@50", 100, 1, 90, true}, {"planned@50", 80, 0.8, 130, false}};
  write_comparison_csv(cmp, rows);
  CHECK(cmp.str() ==
        "name,energy_total_uj,normalized,active_latency_us,qos_met\n"
        "baseline@50,100.000000,1.000000,90.000000,true\n"
        "planned@50,80.000000,0.800000,130.000000,false\n");
}
