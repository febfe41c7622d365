#pragma once

#include "dvfs/clock_tree.hpp"
#include "dvfs/cost_model.hpp"

namespace dvfs {

enum class StepKind { MemorySegment, ComputeSegment, OpaqueLayer, Switch };

/// One charged interval while a layer executes.
struct LayerStep {
  StepKind kind;
  ClockConfig config;  ///< config in force after the step
  double duration_us;
  double energy_uj;
};

/// Replays the execution of `point` starting from SYSCLK = `entry`, calling
/// `visit(const LayerStep&)` for every segment and every actual clock change
/// in order. Returns the config in force when the layer ends.
///
/// Synthesized points replay their LFO/HFO alternation. Ingested points are
/// one opaque interval carrying the recorded latency and energy, preceded
/// by the switch into the layer's first config (LFO when g > 0).
template <class Visit>
ClockConfig walk_layer(const OperatingPoint& point, const ClockConfig& entry, const PowerModel& pm,
                       const SwitchCostModel& scm, Visit&& visit) {
  ClockConfig current = entry;
  auto switch_to = [&](const ClockConfig& target) {
    if (current == target) return;
    const auto cost = switch_cost(current, target, scm);
    current = target;
    visit(LayerStep{StepKind::Switch, current, cost.latency_us, cost.energy_uj});
  };
  auto run = [&](StepKind kind, double duration_us) {
    visit(LayerStep{kind, current, duration_us, duration_us * pm.power_mw(current) * 1e-3});
  };

  if (!point.plan) {
    switch_to(point.g > 0 ? point.lfo : point.hfo);
    visit(LayerStep{StepKind::OpaqueLayer, current, point.latency_us, point.energy_uj});
    return point.hfo;
  }

  const SegmentPlan& plan = *point.plan;
  if (plan.iterations == 0) {
    switch_to(point.hfo);
    run(StepKind::ComputeSegment, plan.compute_us);
    return current;
  }
  for (int i = 0; i < plan.iterations; ++i) {
    switch_to(point.lfo);
    run(StepKind::MemorySegment, plan.mem_us);
    switch_to(point.hfo);
    run(StepKind::ComputeSegment, plan.compute_us);
  }
  return current;
}

}  // namespace dvfs
