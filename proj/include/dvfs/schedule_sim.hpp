#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dvfs/clock_tree.hpp"
#include "dvfs/cost_model.hpp"

namespace dvfs {

enum class IdlePolicy { ConstantClockIdle, ClockGatedIdle };

/// Frequency the unmodified network runs at, and idles at afterwards.
inline constexpr int kBaselineSysclkMhz = 216;

struct Schedule {
  std::vector<OperatingPoint> entries;  ///< one per layer, in layer order
  ClockConfig lfo;
  ClockConfig initial_config;  ///< SYSCLK before the first layer

  /// Throws InvalidConfig when empty or out of layer order.
  void validate() const;
};

struct LayerReport {
  int layer_index = 0;
  int g = 0;
  ClockConfig hfo;
  double start_us = 0.0;
  double latency_us = 0.0;  ///< segments plus switches charged to this layer
  double energy_active_uj = 0.0;
  double energy_switch_uj = 0.0;
  int intra_switches = 0;
  int inter_switches = 0;  ///< 0 or 1: clock change on entry not covered by the layer's own alternation
  bool opaque = false;     ///< replayed from a recorded measurement
};

struct SimEvent {
  enum class Kind { MemorySegment, ComputeSegment, OpaqueLayer, Switch, Idle };
  Kind kind;
  int layer_index;  ///< -1 for the idle tail
  ClockConfig config;
  double start_us;
  double duration_us;
  double energy_uj;
};

struct SimReport {
  double qos_us = 0.0;
  double active_latency_us = 0.0;
  double idle_latency_us = 0.0;
  double energy_active_uj = 0.0;
  double energy_switch_uj = 0.0;
  double energy_idle_uj = 0.0;
  double energy_total_uj = 0.0;
  int switch_count = 0;
  bool qos_met = false;
  /// Sum of the selected points' latencies, i.e. what the optimizer saw;
  /// differs from active_latency_us by inter-layer switch time.
  double planned_latency_us = 0.0;
  double inter_layer_switch_us = 0.0;
  IdlePolicy idle_policy = IdlePolicy::ConstantClockIdle;
  std::vector<LayerReport> per_layer;
  std::vector<SimEvent> events;
};

/// Plays the schedule layer by layer from `initial_config`, then idles
/// until `qos_us` under `idle_policy`. Constant-clock idle draws
/// idle_mw_at(final SYSCLK). An overrun leaves qos_met false and no tail.
SimReport simulate(const Schedule& schedule, double qos_us, const PowerModel& pm, const SwitchCostModel& scm,
                   IdlePolicy idle_policy);

/// Each layer's g = 0 point at the highest HFO frequency not above
/// `cap_mhz` (cheapest among equals). Throws NoConfig if a layer has no
/// undecoupled point.
Schedule baseline_schedule(std::span<const LayerProfile> profiles, int cap_mhz = kBaselineSysclkMhz);

SimReport baseline_constant(std::span<const LayerProfile> profiles, double qos_us, const PowerModel& pm,
                            const SwitchCostModel& scm);
SimReport baseline_gated(std::span<const LayerProfile> profiles, double qos_us, const PowerModel& pm,
                         const SwitchCostModel& scm);

/// Baseline active latency inflated by slack_pct percent.
double qos_from_slack(std::span<const LayerProfile> profiles, double slack_pct);

struct ComparisonRow {
  std::string name;
  double energy_total_uj = 0.0;
  double normalized = 0.0;  ///< relative to the first report
  double active_latency_us = 0.0;
  bool qos_met = false;
};

std::vector<ComparisonRow> compare(std::span<const std::pair<std::string, SimReport>> reports);

}  // namespace dvfs
