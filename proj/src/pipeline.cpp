#include "dvfs/pipeline.hpp"

#include <random>

#include "dvfs/errors.hpp"
#include "dvfs/pareto.hpp"

namespace dvfs {

std::vector<ClockConfig> hfo_candidates(const SweepOptions& opts) {
  const auto all = enumerate_configs(opts.hse, opts.pllm, opts.plln, opts.pllp);
  std::vector<ClockConfig> out;
  for (const auto& e : all)
    if (opts.max_sysclk_mhz <= 0 || e.frequency <= Frequency::mhz(opts.max_sysclk_mhz)) out.push_back(e.config);
  if (out.empty()) throw NoConfig("no HFO configuration survives the SYSCLK limit");
  return out;
}

std::vector<LayerProfile> synthesize_profiles(std::span<const LayerSpec> layers, const Calibration& calib,
                                              const SweepOptions& opts) {
  const auto hfo = hfo_candidates(opts);
  return build_profile_grid(layers, opts.g_set, hfo, ClockConfig::hse_direct(opts.lfo_hse_mhz), calib.power,
                            calib.switching, opts.cost);
}

std::vector<LayerSpec> jitter_network(std::span<const LayerSpec> layers, std::uint64_t seed, double pct) {
  if (!(pct >= 0.0) || pct >= 100.0) throw InvalidConfig("jitter percentage must be in [0, 100)");
  std::vector<LayerSpec> out(layers.begin(), layers.end());
  if (pct == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-pct / 100.0, pct / 100.0);
  for (auto& l : out) {
    l.work_cycles *= 1.0 + dist(rng);
    l.mem_cycles *= 1.0 + dist(rng);
  }
  return out;
}

PlanOutcome plan_and_simulate(std::span<const LayerProfile> profiles, double qos_us, double quantum_us,
                              const Calibration& calib, IdlePolicy idle) {
  PlanProblem problem{pareto_front_all(profiles), qos_us, quantum_us};
  PlanOutcome out;
  out.solution = solve_dp(problem);
  out.schedule.entries = out.solution.selection;
  out.schedule.lfo = out.schedule.entries.front().lfo;
  try {
    out.schedule.initial_config = baseline_schedule(profiles).initial_config;
  } catch (const NoConfig&) {
    out.schedule.initial_config = out.schedule.entries.front().hfo;
  }
  out.report = simulate(out.schedule, qos_us, calib.power, calib.switching, idle);
  return out;
}

}  // namespace dvfs
