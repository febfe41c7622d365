#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dvfs/clock_tree.hpp"
#include "dvfs/cost_model.hpp"
#include "dvfs/io.hpp"
#include "dvfs/mckp.hpp"
#include "dvfs/schedule_sim.hpp"

namespace dvfs {

inline constexpr std::array<int, 2> kDefaultPllm{25, 50};
inline constexpr std::array<int, 7> kDefaultPlln{75, 100, 150, 168, 216, 336, 432};
inline constexpr int kDefaultPllp = 2;
/// LFO runs straight off the crystal at its maximum supported rate.
inline constexpr int kLfoHseMhz = 50;

/// Clock and granularity sweep for synthetic profiles.
struct SweepOptions {
  std::vector<int> hse{kLfoHseMhz};
  std::vector<int> pllm{kDefaultPllm.begin(), kDefaultPllm.end()};
  std::vector<int> plln{kDefaultPlln.begin(), kDefaultPlln.end()};
  int pllp = kDefaultPllp;
  std::vector<int> g_set{kGranularities.begin(), kGranularities.end()};
  int lfo_hse_mhz = kLfoHseMhz;
  /// HFO candidates above this SYSCLK are dropped; <= 0 keeps all.
  int max_sysclk_mhz = kBaselineSysclkMhz;
  CostParams cost;
};

std::vector<ClockConfig> hfo_candidates(const SweepOptions& opts);

std::vector<LayerProfile> synthesize_profiles(std::span<const LayerSpec> layers, const Calibration& calib,
                                              const SweepOptions& opts = {});

/// Scales each layer's cycle counts by an independent factor drawn
/// uniformly from [1 - pct/100, 1 + pct/100]. Deterministic in `seed`.
std::vector<LayerSpec> jitter_network(std::span<const LayerSpec> layers, std::uint64_t seed, double pct);

struct PlanOutcome {
  PlanSolution solution;
  Schedule schedule;
  SimReport report;
};

/// Pareto reduction, MCKP solve and simulation of the resulting schedule.
/// The schedule starts from the baseline clock when one exists.
PlanOutcome plan_and_simulate(std::span<const LayerProfile> profiles, double qos_us, double quantum_us,
                              const Calibration& calib, IdlePolicy idle);

}  // namespace dvfs
