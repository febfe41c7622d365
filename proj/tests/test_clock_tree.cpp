#include <doctest.h>

#include <algorithm>
#include <array>
#include <random>
#include <set>

#include "dvfs/clock_tree.hpp"
#include "dvfs/errors.hpp"
#include "dvfs/pipeline.hpp"

using namespace dvfs;

namespace {

const std::array<int, 1> kHse{50};

}  // namespace

TEST_CASE("compute_frequency follows the PLL law exactly") {
  CHECK(compute_frequency(ClockConfig::pll(50, 25, 100)) == Frequency::mhz(100));
  CHECK(compute_frequency(ClockConfig::pll(50, 50, 200)) == Frequency::mhz(100));
  CHECK(compute_frequency(ClockConfig::hse_direct(50)) == Frequency::mhz(50));
  CHECK(compute_frequency(ClockConfig::pll(50, 25, 216)) == Frequency::mhz(216));
  // PLLM = 50 gives fractional MHz.
  CHECK(compute_frequency(ClockConfig::pll(50, 50, 75)) == Frequency(75, 2));
  CHECK(Frequency(75, 2).to_string() == "37.500");
  CHECK(Frequency(100, 3).to_string() == "33.333");
  CHECK(Frequency(200, 3).to_string() == "66.667");
}

TEST_CASE("invalid clock tuples are rejected at construction") {
  CHECK_THROWS_AS(ClockConfig::pll(50, 0, 100), InvalidConfig);
  CHECK_THROWS_AS(ClockConfig::pll(50, 25, 0), InvalidConfig);
  CHECK_THROWS_AS(ClockConfig::pll(50, 25, 100, 3), InvalidConfig);
  CHECK_THROWS_AS(ClockConfig::hse_direct(0), InvalidConfig);
  CHECK_THROWS_AS(ClockConfig::hse_direct(51), InvalidConfig);
  CHECK_NOTHROW(ClockConfig::pll(1, 1, 1, 8));
}

TEST_CASE("HseDirect ignores PLL fields") {
  const auto a = ClockConfig::hse_direct(50);
  CHECK(a.pllm() == 0);
  CHECK(a.vco() == Frequency{});
  CHECK(a == ClockConfig{});
}

TEST_CASE("enumerate_configs over the default sweep") {
  const auto all = enumerate_configs(kHse, kDefaultPllm, kDefaultPlln, 2);
  REQUIRE(all.size() == 14);
  for (const auto& e : all) {
    // f * pllm * pllp == hse * plln, in integers
    CHECK(e.frequency.num() * e.config.pllm() * 2 == 50LL * e.config.plln() * e.frequency.den());
  }
  CHECK(std::is_sorted(all.begin(), all.end(),
                       [](const EnumeratedConfig& a, const EnumeratedConfig& b) { return a.frequency < b.frequency; }));

  const std::array<int, 1> m25{25};
  const std::array<int, 1> n100{100};
  const auto single = enumerate_configs(kHse, m25, n100, 2);
  REQUIRE(single.size() == 1);
  CHECK(single[0].frequency == Frequency::mhz(100));
}

TEST_CASE("enumerate_configs: 4-tuple hand evaluation") {
  // (m,n): (25,150)->150, (25,300)->300, (50,150)->75, (50,300)->150
  const std::array<int, 2> ms{25, 50};
  const std::array<int, 2> ns{150, 300};
  const auto got = enumerate_configs(kHse, ms, ns, 2);
  REQUIRE(got.size() == 4);
  CHECK(got[0].frequency == Frequency::mhz(75));
  CHECK(got[1].frequency == Frequency::mhz(150));
  CHECK(got[2].frequency == Frequency::mhz(150));
  CHECK(got[3].frequency == Frequency::mhz(300));
  const auto groups = group_iso_frequency(std::span<const EnumeratedConfig>(got));
  CHECK(groups.at(Frequency::mhz(150)).size() == 2);
}

TEST_CASE("VCO window filters the enumeration") {
  VcoRange r{Frequency::mhz(200), Frequency::mhz(432)};
  const auto got = enumerate_configs(kHse, kDefaultPllm, kDefaultPlln, 2, r);
  for (const auto& e : got) {
    CHECK(e.config.vco() >= Frequency::mhz(200));
    CHECK(e.config.vco() <= Frequency::mhz(432));
  }
  CHECK(got.size() < 14);
}

TEST_CASE("group_iso_frequency matches a brute-force grouping") {
  CHECK(group_iso_frequency(std::span<const ClockConfig>{}).empty());

  const std::array<ClockConfig, 2> pair{ClockConfig::pll(50, 25, 100), ClockConfig::pll(50, 50, 200)};
  const auto g2 = group_iso_frequency(std::span<const ClockConfig>(pair));
  REQUIRE(g2.size() == 1);
  CHECK(g2.begin()->first == Frequency::mhz(100));
  CHECK(g2.begin()->second.size() == 2);

  const auto all = enumerate_configs(kHse, kDefaultPllm, kDefaultPlln, 2);
  const auto groups = group_iso_frequency(std::span<const EnumeratedConfig>(all));
  // Brute force: two tuples share a group iff hse*n1*m2 == hse*n2*m1.
  std::size_t covered = 0;
  for (const auto& [f, members] : groups) {
    covered += members.size();
    for (const auto& a : members)
      for (const auto& e : all) {
        const bool same = static_cast<long long>(a.plln()) * e.config.pllm() ==
                          static_cast<long long>(e.config.plln()) * a.pllm();
        const bool listed = std::find(members.begin(), members.end(), e.config) != members.end();
        CHECK(same == listed);
      }
  }
  CHECK(covered == all.size());

  const auto& g100 = groups.at(Frequency::mhz(100));
  REQUIRE(g100.size() == 1);
  CHECK(g100[0] == ClockConfig::pll(50, 25, 100));
  const auto& g75 = groups.at(Frequency::mhz(75));
  REQUIRE(g75.size() == 2);
  CHECK(std::find(g75.begin(), g75.end(), ClockConfig::pll(50, 50, 150)) != g75.end());
  CHECK(std::find(g75.begin(), g75.end(), ClockConfig::pll(50, 25, 75)) != g75.end());
}

TEST_CASE("min_power_config") {
  PowerModel pm;
  const std::array<ClockConfig, 2> pair{ClockConfig::pll(50, 50, 200), ClockConfig::pll(50, 25, 100)};
  // Both VCOs are 200 MHz, power ties, smaller PLLN wins.
  CHECK(pm.power_mw(pair[0]) == pm.power_mw(pair[1]));
  CHECK(min_power_config(Frequency::mhz(100), pair, pm) == ClockConfig::pll(50, 25, 100));

  const std::array<ClockConfig, 1> one{ClockConfig::pll(50, 25, 150)};
  CHECK(min_power_config(Frequency::mhz(150), one, pm) == one[0]);

  // Same 216 MHz SYSCLK, VCO 432 vs 864.
  const std::array<ClockConfig, 2> vco{ClockConfig::pll(50, 25, 432, 4), ClockConfig::pll(50, 25, 216, 2)};
  CHECK(vco[0].vco() == Frequency::mhz(864));
  CHECK(pm.power_mw(vco[0]) > pm.power_mw(vco[1]));
  CHECK(min_power_config(Frequency::mhz(216), vco, pm) == vco[1]);

  CHECK_THROWS_AS(min_power_config(Frequency::mhz(100), std::span<const ClockConfig>{}, pm), NoConfig);
  CHECK_THROWS_AS(min_power_config(Frequency::mhz(123), pair, pm), NoConfig);
}

TEST_CASE("min_power_config is permutation invariant") {
  PowerModel pm;
  std::vector<ClockConfig> group;
  for (int p : {2, 4, 6, 8})
    for (int m : {5, 10, 25, 50}) group.push_back(ClockConfig::pll(50, m, 432 * m * p / 100 / 2, p));
  // keep only members at the most common frequency
  const auto groups = group_iso_frequency(std::span<const ClockConfig>(group));
  const auto biggest = std::max_element(groups.begin(), groups.end(),
                                        [](const auto& a, const auto& b) { return a.second.size() < b.second.size(); });
  auto members = biggest->second;
  REQUIRE(members.size() > 1);
  const auto expected = min_power_config(biggest->first, members, pm);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    std::shuffle(members.begin(), members.end(), rng);
    CHECK(min_power_config(biggest->first, members, pm) == expected);
  }
}

TEST_CASE("switch_cost classification") {
  SwitchCostModel scm;
  const auto pll216 = ClockConfig::pll(50, 25, 216);
  const auto hse = ClockConfig::hse_direct(50);
  CHECK(switch_cost(pll216, hse, scm).latency_us == 0.0);
  CHECK(switch_cost(hse, pll216, scm).latency_us == 200.0);
  CHECK(switch_cost(pll216, pll216, scm).latency_us == 0.0);
  CHECK(switch_cost(pll216, ClockConfig::pll(50, 25, 100), scm).latency_us == 200.0);
  CHECK(switch_cost(hse, pll216, scm).energy_uj == doctest::Approx(200.0 * 120.0 * 1e-3));

  const std::array<ClockConfig, 4> configs{hse, pll216, ClockConfig::pll(50, 50, 150), ClockConfig::hse_direct(25)};
  for (const auto& from : configs) {
    CHECK(switch_cost(from, from, scm).latency_us == 0.0);
    for (const auto& to_hse : configs) {
      if (to_hse.is_pll()) continue;
      for (const auto& to_pll : configs)
        if (to_pll.is_pll() && to_pll != from)
          CHECK(switch_cost(from, to_hse, scm).latency_us <= switch_cost(from, to_pll, scm).latency_us);
    }
  }
}

TEST_CASE("model validation") {
  PowerModel pm;
  CHECK_NOTHROW(pm.validate());
  pm.static_mw = -1;
  CHECK_THROWS_AS(pm.validate(), InvalidConfig);
  SwitchCostModel scm;
  scm.to_hse_us = 300;
  CHECK_THROWS_AS(scm.validate(), InvalidConfig);
}
