#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dvfs/clock_tree.hpp"

namespace dvfs {

enum class LayerKind { Depthwise, Pointwise, Other };

/// Decoupling granularities explored per layer; 0 means the layer runs as-is.
inline constexpr std::array<int, 6> kGranularities{0, 2, 4, 8, 12, 16};

bool is_valid_granularity(int g) noexcept;

/// Per-g multiplier applied to compute-segment cycles once a layer is
/// decoupled. Mild gain from buffering at small g, cache pressure at large g.
struct DaeOverhead {
  std::map<int, double> factor{{0, 1.00}, {2, 0.98}, {4, 0.95}, {8, 0.92}, {12, 0.94}, {16, 1.02}};

  double at(int g) const;
};

struct LayerSpec {
  int index = 0;
  LayerKind kind = LayerKind::Other;
  int channels = 1;
  std::pair<int, int> spatial{1, 1};
  std::pair<int, int> kernel{1, 1};
  /// Compute-bound and memory-bound CPU cycles of the undecoupled layer.
  double work_cycles = 0.0;
  double mem_cycles = 0.0;
  DaeOverhead overhead;

  /// Units buffered per fetch phase: channels (depthwise) or output columns
  /// h*w (pointwise). Other layers have a single unit.
  int decoupling_units() const noexcept;
  bool admits_decoupling() const noexcept { return kind != LayerKind::Other; }

  /// Throws InvalidConfig when cycle counts or shape are non-positive.
  void validate() const;
};

/// Segment structure of a decoupled layer, kept so the simulator can replay
/// the LFO/HFO alternation event by event. `iterations == 0` means the whole
/// layer is a single `compute_us` segment at the HFO config.
struct SegmentPlan {
  int iterations = 0;
  double mem_us = 0.0;      ///< per-iteration memory segment, at LFO
  double compute_us = 0.0;  ///< per-iteration compute segment, at HFO

  friend bool operator==(const SegmentPlan&, const SegmentPlan&) = default;
};

/// One (layer, g, HFO) choice. Latency and energy include the layer's own
/// LFO/HFO switches.
struct OperatingPoint {
  int layer_index = 0;
  int g = 0;
  ClockConfig lfo;
  ClockConfig hfo;
  double latency_us = 0.0;
  double energy_uj = 0.0;
  /// Present for synthesized points; absent for ingested measurements.
  std::optional<SegmentPlan> plan;

  friend bool operator==(const OperatingPoint&, const OperatingPoint&) = default;
};

struct LayerProfile {
  int layer_index = 0;
  LayerKind kind = LayerKind::Other;
  std::vector<OperatingPoint> points;

  /// Non-empty, one layer index, no repeated (g, hfo).
  void validate() const;
};

/// Analytic knobs of the synthetic model.
struct CostParams {
  /// Memory segments stop speeding up above this clock.
  double mem_ceiling_mhz = 50.0;
};

/// Number of LFO/HFO iterations a layer is split into at granularity g.
int iteration_count(const LayerSpec& layer, int g);

/// Latency and energy of `layer` at granularity g with memory phases on
/// `lfo` (HseDirect) and compute phases on `hfo` (Pll).
///
/// Each of the ceil(units / g) iterations is: switch to LFO, memory
/// segment, switch to HFO, compute segment. The layer is entered at HFO.
/// g = 0 runs everything at HFO with no switching.
OperatingPoint synthesize_point(const LayerSpec& layer, int g, const ClockConfig& lfo, const ClockConfig& hfo,
                                const PowerModel& pm, const SwitchCostModel& scm, const CostParams& params = {});

/// Full sweep layers x g_set x hfo_set; g > 0 is skipped for Other layers.
/// Points are ordered by g, then by position in `hfo_set`. Parallel over
/// (layer, g, hfo) with OpenMP; results are identical to the serial sweep.
std::vector<LayerProfile> build_profile_grid(std::span<const LayerSpec> layers, std::span<const int> g_set,
                                             std::span<const ClockConfig> hfo_set, const ClockConfig& lfo,
                                             const PowerModel& pm, const SwitchCostModel& scm,
                                             const CostParams& params = {});

/// Single-threaded reference for build_profile_grid.
std::vector<LayerProfile> build_profile_grid_serial(std::span<const LayerSpec> layers, std::span<const int> g_set,
                                                    std::span<const ClockConfig> hfo_set, const ClockConfig& lfo,
                                                    const PowerModel& pm, const SwitchCostModel& scm,
                                                    const CostParams& params = {});

/// Reads measured operating points (JSON Lines, one point per line).
/// Identical repeated rows collapse; differing repeats raise ConflictError.
std::vector<LayerProfile> ingest_profiles(std::istream& in);
std::vector<LayerProfile> ingest_profiles(const std::filesystem::path& path);

}  // namespace dvfs
