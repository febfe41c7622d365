#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "dvfs/frequency.hpp"

namespace dvfs {

enum class ClockSource { HseDirect, Pll };

/// One SYSCLK generation path: the HSE crystal wired straight to SYSCLK, or
/// HSE through the PLL (input divider M, VCO multiplier N, output divider P).
///
/// Construct through `hse_direct` / `pll`; both validate. For HseDirect the
/// PLL fields are stored as zero so equality ignores them.
class ClockConfig {
 public:
  /// HSE at 50 MHz, wired directly.
  ClockConfig() = default;

  static ClockConfig hse_direct(int hse_mhz);
  static ClockConfig pll(int hse_mhz, int pllm, int plln, int pllp = 2);

  ClockSource source() const noexcept { return source_; }
  bool is_pll() const noexcept { return source_ == ClockSource::Pll; }
  int hse_mhz() const noexcept { return hse_mhz_; }
  int pllm() const noexcept { return pllm_; }
  int plln() const noexcept { return plln_; }
  int pllp() const noexcept { return pllp_; }

  /// SYSCLK output; see compute_frequency.
  Frequency sysclk() const;
  /// VCO output, hse * plln / pllm. Zero for HseDirect.
  Frequency vco() const;

  friend bool operator==(const ClockConfig&, const ClockConfig&) = default;
  friend auto operator<=>(const ClockConfig&, const ClockConfig&) = default;

 private:
  ClockSource source_ = ClockSource::HseDirect;
  int hse_mhz_ = 50;
  int pllm_ = 0;
  int plln_ = 0;
  int pllp_ = 0;
};

inline constexpr int kMinHseMhz = 1;
inline constexpr int kMaxHseMhz = 50;

/// F_sysclk = F_hse * PLLN / (PLLM * PLLP), or F_hse for the direct path.
Frequency compute_frequency(const ClockConfig& cfg);

/// Board power draw as a function of the active clock configuration.
///
///   run power  = static + dynamic * f_sysclk + vco_penalty * f_vco
///   idle power = idle_intercept + idle_slope * f_sysclk   (clock left running)
///   gated idle = gated_idle                                (clocks gated off)
struct PowerModel {
  double static_mw = 20.0;
  double dynamic_mw_per_mhz = 1.0;
  double vco_penalty_mw_per_mhz = 0.35;
  double idle_mw_intercept = 15.0;
  double idle_mw_slope = 0.55;
  double gated_idle_mw = 6.0;

  /// Throws InvalidConfig on any negative coefficient.
  void validate() const;

  double power_mw(const ClockConfig& cfg) const;
  double idle_mw_at(const Frequency& f) const;
};

struct SwitchCostModel {
  double pll_reconfigure_us = 200.0;
  double to_hse_us = 0.0;
  double switch_power_mw = 120.0;

  /// Requires pll_reconfigure_us >= to_hse_us >= 0 and switch_power_mw >= 0.
  void validate() const;
};

struct SwitchCost {
  double latency_us = 0.0;
  double energy_uj = 0.0;
};

/// Cost of moving SYSCLK from `from` to `to`. Dropping to the direct HSE
/// path is a mux flip; any PLL target with different parameters (or coming
/// from HSE) needs a PLL restart and relock.
SwitchCost switch_cost(const ClockConfig& from, const ClockConfig& to, const SwitchCostModel& scm);

struct EnumeratedConfig {
  ClockConfig config;
  Frequency frequency;
};

/// Inclusive VCO output window in MHz; either bound may be left open.
struct VcoRange {
  std::optional<Frequency> min;
  std::optional<Frequency> max;
};

/// Cartesian product hse x pllm x plln at a fixed pllp, sorted by SYSCLK,
/// then VCO frequency, then (hse, pllm, plln).
std::vector<EnumeratedConfig> enumerate_configs(std::span<const int> hse_set, std::span<const int> pllm_set,
                                                std::span<const int> plln_set, int pllp,
                                                const VcoRange& vco = {});

std::map<Frequency, std::vector<ClockConfig>> group_iso_frequency(std::span<const ClockConfig> configs);
std::map<Frequency, std::vector<ClockConfig>> group_iso_frequency(std::span<const EnumeratedConfig> configs);

/// Cheapest member of `configs` that runs at `frequency`. Ties go to the
/// lower VCO frequency, then the smaller PLLN. Throws NoConfig when nothing
/// in `configs` produces `frequency`.
ClockConfig min_power_config(const Frequency& frequency, std::span<const ClockConfig> configs,
                             const PowerModel& pm);

}  // namespace dvfs
