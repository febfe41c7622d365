#include "dvfs/schedule_sim.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "dvfs/errors.hpp"
#include "dvfs/layer_walk.hpp"
#include "dvfs/mckp.hpp"

namespace dvfs {

namespace {

SimEvent::Kind event_kind(StepKind k) {
  switch (k) {
    case StepKind::MemorySegment:
      return SimEvent::Kind::MemorySegment;
    case StepKind::ComputeSegment:
      return SimEvent::Kind::ComputeSegment;
    case StepKind::OpaqueLayer:
      return SimEvent::Kind::OpaqueLayer;
    case StepKind::Switch:
      break;
  }
  return SimEvent::Kind::Switch;
}

}  // namespace

void Schedule::validate() const {
  if (entries.empty()) throw InvalidConfig("schedule has no layers");
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].layer_index <= entries[i - 1].layer_index)
      throw InvalidConfig("schedule entries must be in strictly increasing layer order");
}

SimReport simulate(const Schedule& schedule, double qos_us, const PowerModel& pm, const SwitchCostModel& scm,
                   IdlePolicy idle_policy) {
  schedule.validate();
  if (!(qos_us > 0.0)) throw InvalidConfig("QoS budget must be positive");

  SimReport r;
  r.qos_us = qos_us;
  r.idle_policy = idle_policy;
  double clock = 0.0;
  ClockConfig current = schedule.initial_config;

  for (const auto& point : schedule.entries) {
    LayerReport lr;
    lr.layer_index = point.layer_index;
    lr.g = point.g;
    lr.hfo = point.hfo;
    lr.start_us = clock;
    lr.opaque = !point.plan.has_value();
    // For a replayed alternation the first switch (into LFO) is the layer's
    // own; for g = 0 and recorded layers the entry switch is inter-layer.
    const bool entry_is_intra = point.plan && point.plan->iterations > 0;
    bool first_step = true;

    current = walk_layer(point, current, pm, scm, [&](const LayerStep& step) {
      if (step.kind == StepKind::Switch) {
        if (first_step && !entry_is_intra) {
          ++lr.inter_switches;
          r.inter_layer_switch_us += step.duration_us;
        } else {
          ++lr.intra_switches;
        }
        lr.energy_switch_uj += step.energy_uj;
        r.energy_switch_uj += step.energy_uj;
        ++r.switch_count;
      } else {
        lr.energy_active_uj += step.energy_uj;
        r.energy_active_uj += step.energy_uj;
      }
      r.events.push_back({event_kind(step.kind), point.layer_index, step.config, clock, step.duration_us,
                          step.energy_uj});
      first_step = false;
      clock += step.duration_us;
    });

    lr.latency_us = clock - lr.start_us;
    r.planned_latency_us += point.latency_us;
    r.per_layer.push_back(lr);
  }

  r.active_latency_us = clock;
  r.qos_met = r.active_latency_us <= qos_us;
  if (r.qos_met) {
    r.idle_latency_us = qos_us - r.active_latency_us;
    const double idle_mw =
        idle_policy == IdlePolicy::ClockGatedIdle ? pm.gated_idle_mw : pm.idle_mw_at(current.sysclk());
    r.energy_idle_uj = r.idle_latency_us * idle_mw * 1e-3;
    if (r.idle_latency_us > 0.0)
      r.events.push_back({SimEvent::Kind::Idle, -1, current, clock, r.idle_latency_us, r.energy_idle_uj});
  }
  r.energy_total_uj = r.energy_active_uj + r.energy_switch_uj + r.energy_idle_uj;
  return r;
}

Schedule baseline_schedule(std::span<const LayerProfile> profiles, int cap_mhz) {
  if (profiles.empty()) throw InvalidConfig("no layer profiles");
  const Frequency cap = Frequency::mhz(cap_mhz);
  Schedule s;
  for (const auto& profile : profiles) {
    const OperatingPoint* best = nullptr;
    for (const auto& p : profile.points) {
      if (p.g != 0 || p.hfo.sysclk() > cap) continue;
      if (!best) {
        best = &p;
        continue;
      }
      const auto f = p.hfo.sysclk();
      const auto bf = best->hfo.sysclk();
      if (f > bf || (f == bf && (p.energy_uj < best->energy_uj ||
                                 (p.energy_uj == best->energy_uj && p.hfo < best->hfo))))
        best = &p;
    }
    if (!best)
      throw NoConfig(fmt::format("layer {} has no undecoupled point at or below {} MHz", profile.layer_index, cap_mhz));
    s.entries.push_back(*best);
  }
  std::sort(s.entries.begin(), s.entries.end(),
            [](const OperatingPoint& a, const OperatingPoint& b) { return a.layer_index < b.layer_index; });
  s.lfo = s.entries.front().lfo;
  s.initial_config = s.entries.front().hfo;
  return s;
}

SimReport baseline_constant(std::span<const LayerProfile> profiles, double qos_us, const PowerModel& pm,
                            const SwitchCostModel& scm) {
  return simulate(baseline_schedule(profiles), qos_us, pm, scm, IdlePolicy::ConstantClockIdle);
}

SimReport baseline_gated(std::span<const LayerProfile> profiles, double qos_us, const PowerModel& pm,
                         const SwitchCostModel& scm) {
  return simulate(baseline_schedule(profiles), qos_us, pm, scm, IdlePolicy::ClockGatedIdle);
}

double qos_from_slack(std::span<const LayerProfile> profiles, double slack_pct) {
  if (!(slack_pct >= 0.0)) throw InvalidConfig("QoS slack must be non-negative");
  const auto base = baseline_schedule(profiles);
  return energy_of(base.entries).latency_us * (1.0 + slack_pct / 100.0);
}

std::vector<ComparisonRow> compare(std::span<const std::pair<std::string, SimReport>> reports) {
  std::vector<ComparisonRow> rows;
  if (reports.empty()) return rows;
  const double reference = reports.front().second.energy_total_uj;
  for (const auto& [name, r] : reports)
    rows.push_back({name, r.energy_total_uj, r.energy_total_uj / reference, r.active_latency_us, r.qos_met});
  return rows;
}

}  // namespace dvfs
