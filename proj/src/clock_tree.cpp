#include "dvfs/clock_tree.hpp"

#include <algorithm>
#include <tuple>

#include <fmt/format.h>

#include "dvfs/errors.hpp"

namespace dvfs {

namespace {

bool valid_pllp(int p) { return p == 2 || p == 4 || p == 6 || p == 8; }

void check_hse(int hse_mhz) {
  if (hse_mhz < kMinHseMhz || hse_mhz > kMaxHseMhz)
    throw InvalidConfig(fmt::format("HSE {} MHz outside [{}, {}]", hse_mhz, kMinHseMhz, kMaxHseMhz));
}

}  // namespace

ClockConfig ClockConfig::hse_direct(int hse_mhz) {
  check_hse(hse_mhz);
  ClockConfig c;
  c.source_ = ClockSource::HseDirect;
  c.hse_mhz_ = hse_mhz;
  return c;
}

ClockConfig ClockConfig::pll(int hse_mhz, int pllm, int plln, int pllp) {
  check_hse(hse_mhz);
  if (pllm < 1) throw InvalidConfig(fmt::format("PLLM must be >= 1, got {}", pllm));
  if (plln < 1) throw InvalidConfig(fmt::format("PLLN must be >= 1, got {}", plln));
  if (!valid_pllp(pllp)) throw InvalidConfig(fmt::format("PLLP must be one of 2,4,6,8, got {}", pllp));
  ClockConfig c;
  c.source_ = ClockSource::Pll;
  c.hse_mhz_ = hse_mhz;
  c.pllm_ = pllm;
  c.plln_ = plln;
  c.pllp_ = pllp;
  return c;
}

Frequency ClockConfig::sysclk() const { return compute_frequency(*this); }

Frequency ClockConfig::vco() const {
  if (!is_pll()) return Frequency{};
  return Frequency(static_cast<std::int64_t>(hse_mhz_) * plln_, pllm_);
}

Frequency compute_frequency(const ClockConfig& cfg) {
  if (!cfg.is_pll()) return Frequency::mhz(cfg.hse_mhz());
  return Frequency(static_cast<std::int64_t>(cfg.hse_mhz()) * cfg.plln(),
                   static_cast<std::int64_t>(cfg.pllm()) * cfg.pllp());
}

void PowerModel::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"static_mw", static_mw},
      {"dynamic_mw_per_mhz", dynamic_mw_per_mhz},
      {"vco_penalty_mw_per_mhz", vco_penalty_mw_per_mhz},
      {"idle_mw_intercept", idle_mw_intercept},
      {"idle_mw_slope", idle_mw_slope},
      {"gated_idle_mw", gated_idle_mw},
  };
  for (const auto& [name, value] : fields)
    if (!(value >= 0.0)) throw InvalidConfig(fmt::format("{} must be non-negative, got {}", name, value));
}

double PowerModel::power_mw(const ClockConfig& cfg) const {
  return static_mw + dynamic_mw_per_mhz * cfg.sysclk().as_mhz() + vco_penalty_mw_per_mhz * cfg.vco().as_mhz();
}

double PowerModel::idle_mw_at(const Frequency& f) const { return idle_mw_intercept + idle_mw_slope * f.as_mhz(); }

void SwitchCostModel::validate() const {
  if (!(to_hse_us >= 0.0)) throw InvalidConfig("to_hse_us must be non-negative");
  if (!(pll_reconfigure_us >= to_hse_us))
    throw InvalidConfig("pll_reconfigure_us must be at least to_hse_us");
  if (!(switch_power_mw >= 0.0)) throw InvalidConfig("switch_power_mw must be non-negative");
}

SwitchCost switch_cost(const ClockConfig& from, const ClockConfig& to, const SwitchCostModel& scm) {
  if (from == to) return {};
  const double latency = to.is_pll() ? scm.pll_reconfigure_us : scm.to_hse_us;
  // mW * us = nJ
  return {latency, latency * scm.switch_power_mw * 1e-3};
}

std::vector<EnumeratedConfig> enumerate_configs(std::span<const int> hse_set, std::span<const int> pllm_set,
                                                std::span<const int> plln_set, int pllp, const VcoRange& vco) {
  std::vector<EnumeratedConfig> out;
  out.reserve(hse_set.size() * pllm_set.size() * plln_set.size());
  for (int hse : hse_set)
    for (int m : pllm_set)
      for (int n : plln_set) {
        auto cfg = ClockConfig::pll(hse, m, n, pllp);
        const auto v = cfg.vco();
        if (vco.min && v < *vco.min) continue;
        if (vco.max && v > *vco.max) continue;
        out.push_back({cfg, cfg.sysclk()});
      }
  std::sort(out.begin(), out.end(), [](const EnumeratedConfig& a, const EnumeratedConfig& b) {
    const auto va = a.config.vco();
    const auto vb = b.config.vco();
    return std::tie(a.frequency, va, a.config) < std::tie(b.frequency, vb, b.config);
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const EnumeratedConfig& a, const EnumeratedConfig& b) { return a.config == b.config; }),
            out.end());
  return out;
}

std::map<Frequency, std::vector<ClockConfig>> group_iso_frequency(std::span<const ClockConfig> configs) {
  std::map<Frequency, std::vector<ClockConfig>> groups;
  for (const auto& c : configs) groups[c.sysclk()].push_back(c);
  return groups;
}

std::map<Frequency, std::vector<ClockConfig>> group_iso_frequency(std::span<const EnumeratedConfig> configs) {
  std::map<Frequency, std::vector<ClockConfig>> groups;
  for (const auto& e : configs) groups[e.frequency].push_back(e.config);
  return groups;
}

ClockConfig min_power_config(const Frequency& frequency, std::span<const ClockConfig> configs,
                             const PowerModel& pm) {
  const ClockConfig* best = nullptr;
  double best_power = 0.0;
  for (const auto& c : configs) {
    if (c.sysclk() != frequency) continue;
    const double p = pm.power_mw(c);
    if (!best) {
      best = &c;
      best_power = p;
      continue;
    }
    // Remaining fields make the order total, so input permutation cannot matter.
    const auto cv = c.vco();
    const auto bv = best->vco();
    const int cn = c.plln();
    const int bn = best->plln();
    if (std::tie(p, cv, cn, c) < std::tie(best_power, bv, bn, *best)) {
      best = &c;
      best_power = p;
    }
  }
  if (!best) throw NoConfig(fmt::format("no clock configuration produces {} MHz", frequency.to_string()));
  return *best;
}

}  // namespace dvfs
