#include "dvfs/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

#include "dvfs/errors.hpp"
#include "dvfs/io.hpp"
#include "dvfs/layer_walk.hpp"

namespace dvfs {

bool is_valid_granularity(int g) noexcept {
  return std::find(kGranularities.begin(), kGranularities.end(), g) != kGranularities.end();
}

double DaeOverhead::at(int g) const {
  if (auto it = factor.find(g); it != factor.end()) return it->second;
  throw InvalidConfig(fmt::format("no DAE overhead factor for g={}", g));
}

int LayerSpec::decoupling_units() const noexcept {
  switch (kind) {
    case LayerKind::Depthwise:
      return channels;
    case LayerKind::Pointwise:
      return spatial.first * spatial.second;
    case LayerKind::Other:
      break;
  }
  return 1;
}

void LayerSpec::validate() const {
  if (!(work_cycles > 0.0) || !(mem_cycles > 0.0))
    throw InvalidConfig(fmt::format("layer {}: work_cycles and mem_cycles must be positive", index));
  if (channels < 1 || spatial.first < 1 || spatial.second < 1 || kernel.first < 1 || kernel.second < 1)
    throw InvalidConfig(fmt::format("layer {}: shape dimensions must be positive", index));
  for (const auto& [g, f] : overhead.factor)
    if (!(f > 0.0)) throw InvalidConfig(fmt::format("layer {}: overhead for g={} must be positive", index, g));
}

void LayerProfile::validate() const {
  if (points.empty()) throw EmptyProfile(fmt::format("layer {} has no operating points", layer_index));
  std::vector<std::pair<int, ClockConfig>> keys;
  keys.reserve(points.size());
  for (const auto& p : points) {
    if (p.layer_index != layer_index)
      throw InvalidConfig(fmt::format("point for layer {} inside profile of layer {}", p.layer_index, layer_index));
    keys.emplace_back(p.g, p.hfo);
  }
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
    throw InvalidConfig(fmt::format("layer {} has duplicate (g, hfo) points", layer_index));
}

int iteration_count(const LayerSpec& layer, int g) {
  if (g == 0) return 0;
  const int units = layer.decoupling_units();
  return (units + g - 1) / g;
}

OperatingPoint synthesize_point(const LayerSpec& layer, int g, const ClockConfig& lfo, const ClockConfig& hfo,
                                const PowerModel& pm, const SwitchCostModel& scm, const CostParams& params) {
  if (!is_valid_granularity(g)) throw InvalidConfig(fmt::format("granularity {} not in {{0,2,4,8,12,16}}", g));
  if (g > 0 && !layer.admits_decoupling())
    throw UnsupportedGranularity(fmt::format("layer {}: g={} requested on a non-decoupled layer kind", layer.index, g));
  if (lfo.is_pll()) throw InvalidConfig("LFO must use the direct HSE path");
  if (!hfo.is_pll()) throw InvalidConfig("HFO must use the PLL");

  const double f_hfo = hfo.sysclk().as_mhz();
  SegmentPlan plan;
  if (g == 0) {
    plan.compute_us = (layer.mem_cycles + layer.work_cycles) / f_hfo;
  } else {
    const double f_mem = std::min(lfo.sysclk().as_mhz(), params.mem_ceiling_mhz);
    plan.iterations = iteration_count(layer, g);
    const double s = plan.iterations;
    plan.mem_us = (layer.mem_cycles / s) / f_mem;
    plan.compute_us = (layer.work_cycles / s) * layer.overhead.at(g) / f_hfo;
  }

  OperatingPoint point{layer.index, g, lfo, hfo, 0.0, 0.0, plan};
  double latency = 0.0;
  double energy = 0.0;
  walk_layer(point, hfo, pm, scm, [&](const LayerStep& step) {
    latency += step.duration_us;
    energy += step.energy_uj;
  });
  point.latency_us = latency;
  point.energy_uj = energy;
  return point;
}

namespace {

struct GridTask {
  std::size_t layer;
  int g;
  std::size_t hfo;
};

std::vector<GridTask> plan_grid(std::span<const LayerSpec> layers, std::span<const int> g_set,
                                std::span<const ClockConfig> hfo_set, const ClockConfig& lfo,
                                std::vector<LayerProfile>& out) {
  if (lfo.is_pll()) throw InvalidConfig("LFO must use the direct HSE path");
  for (const auto& h : hfo_set)
    if (!h.is_pll()) throw InvalidConfig("HFO set may only contain PLL configurations");
  std::vector<int> gs(g_set.begin(), g_set.end());
  std::sort(gs.begin(), gs.end());
  gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
  for (int g : gs)
    if (!is_valid_granularity(g)) throw InvalidConfig(fmt::format("granularity {} not in {{0,2,4,8,12,16}}", g));

  std::vector<GridTask> tasks;
  out.clear();
  out.reserve(layers.size());
  for (std::size_t li = 0; li < layers.size(); ++li) {
    layers[li].validate();
    out.push_back({layers[li].index, layers[li].kind, {}});
    for (int g : gs) {
      if (g > 0 && !layers[li].admits_decoupling()) continue;
      if (g > 0) layers[li].overhead.at(g);
      for (std::size_t hi = 0; hi < hfo_set.size(); ++hi) tasks.push_back({li, g, hi});
    }
  }
  return tasks;
}

void scatter(std::vector<LayerProfile>& out, std::span<const GridTask> tasks, std::vector<OperatingPoint>& points) {
  for (std::size_t i = 0; i < tasks.size(); ++i) out[tasks[i].layer].points.push_back(std::move(points[i]));
}

}  // namespace

std::vector<LayerProfile> build_profile_grid(std::span<const LayerSpec> layers, std::span<const int> g_set,
                                             std::span<const ClockConfig> hfo_set, const ClockConfig& lfo,
                                             const PowerModel& pm, const SwitchCostModel& scm,
                                             const CostParams& params) {
  std::vector<LayerProfile> out;
  const auto tasks = plan_grid(layers, g_set, hfo_set, lfo, out);
  std::vector<OperatingPoint> points(tasks.size());
  const auto n = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& t = tasks[static_cast<std::size_t>(i)];
    points[static_cast<std::size_t>(i)] = synthesize_point(layers[t.layer], t.g, lfo, hfo_set[t.hfo], pm, scm, params);
  }
  scatter(out, tasks, points);
  return out;
}

std::vector<LayerProfile> build_profile_grid_serial(std::span<const LayerSpec> layers, std::span<const int> g_set,
                                                    std::span<const ClockConfig> hfo_set, const ClockConfig& lfo,
                                                    const PowerModel& pm, const SwitchCostModel& scm,
                                                    const CostParams& params) {
  std::vector<LayerProfile> out;
  const auto tasks = plan_grid(layers, g_set, hfo_set, lfo, out);
  std::vector<OperatingPoint> points;
  points.reserve(tasks.size());
  for (const auto& t : tasks) points.push_back(synthesize_point(layers[t.layer], t.g, lfo, hfo_set[t.hfo], pm, scm, params));
  scatter(out, tasks, points);
  return out;
}

namespace {

using json = nlohmann::json;

template <class T>
T required(const json& row, const char* key, std::size_t line) {
  if (!row.contains(key) || row[key].is_null()) throw ParseError(line, fmt::format("missing field '{}'", key));
  try {
    return row[key].get<T>();
  } catch (const json::exception&) {
    throw ParseError(line, fmt::format("field '{}' has the wrong type", key));
  }
}

std::optional<int> optional_int(const json& row, const char* key, std::size_t line) {
  if (!row.contains(key) || row[key].is_null()) return std::nullopt;
  if (!row[key].is_number_integer()) throw ParseError(line, fmt::format("field '{}' must be an integer or null", key));
  return row[key].get<int>();
}

struct IngestRow {
  LayerKind kind;
  OperatingPoint point;
  std::size_t line;
};

IngestRow parse_row(const json& row, std::size_t line) {
  if (!row.is_object()) throw ParseError(line, "expected a JSON object");
  IngestRow r{};
  r.line = line;
  auto& p = r.point;
  p.layer_index = required<int>(row, "layer", line);
  if (p.layer_index < 0) throw ParseError(line, "layer index must be non-negative");
  try {
    r.kind = layer_kind_from_string(required<std::string>(row, "kind", line));
  } catch (const InvalidConfig& e) {
    throw ParseError(line, e.what());
  }
  p.g = required<int>(row, "g", line);
  if (!is_valid_granularity(p.g)) throw ParseError(line, fmt::format("g={} not in {{0,2,4,8,12,16}}", p.g));
  if (p.g > 0 && r.kind == LayerKind::Other) throw ParseError(line, "g > 0 on a layer of kind 'other'");

  const int hse = required<int>(row, "hse_mhz", line);
  const auto pllm = optional_int(row, "pllm", line);
  const auto plln = optional_int(row, "plln", line);
  const int pllp = optional_int(row, "pllp", line).value_or(2);
  try {
    p.lfo = ClockConfig::hse_direct(hse);
    if (pllm.has_value() != plln.has_value()) throw ParseError(line, "pllm and plln must both be set or both be null");
    if (pllm) {
      p.hfo = ClockConfig::pll(hse, *pllm, *plln, pllp);
    } else {
      if (p.g > 0) throw ParseError(line, "decoupled points need a PLL compute clock");
      p.hfo = p.lfo;
    }
  } catch (const InvalidConfig& e) {
    throw ParseError(line, e.what());
  }

  p.latency_us = required<double>(row, "latency_us", line);
  p.energy_uj = required<double>(row, "energy_uj", line);
  if (!(p.latency_us > 0.0) || !std::isfinite(p.latency_us)) throw ParseError(line, "latency_us must be positive");
  if (!(p.energy_uj > 0.0) || !std::isfinite(p.energy_uj)) throw ParseError(line, "energy_uj must be positive");

  if (row.contains("plan") && !row["plan"].is_null()) {
    try {
      p.plan = segment_plan_from_json(row["plan"]);
    } catch (const Error& e) {
      throw ParseError(line, e.what());
    }
  }
  return r;
}

}  // namespace

std::vector<LayerProfile> ingest_profiles(std::istream& in) {
  std::map<int, LayerProfile> layers;
  std::map<std::tuple<int, int, ClockConfig>, std::size_t> seen;  // key -> first line
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json row;
    try {
      row = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(line, fmt::format("invalid JSON: {}", e.what()));
    }
    auto r = parse_row(row, line);
    auto [it, inserted] = layers.try_emplace(r.point.layer_index);
    auto& profile = it->second;
    if (inserted) {
      profile.layer_index = r.point.layer_index;
      profile.kind = r.kind;
    } else if (profile.kind != r.kind) {
      throw ConflictError(line, fmt::format("layer {} declared with two different kinds", r.point.layer_index));
    }
    const auto key = std::make_tuple(r.point.layer_index, r.point.g, r.point.hfo);
    if (auto s = seen.find(key); s != seen.end()) {
      const auto& prior = *std::find_if(profile.points.begin(), profile.points.end(), [&](const OperatingPoint& q) {
        return q.g == r.point.g && q.hfo == r.point.hfo;
      });
      if (prior == r.point) continue;
      throw ConflictError(line, fmt::format("layer {} g={} conflicts with line {}", r.point.layer_index, r.point.g,
                                            s->second));
    }
    seen.emplace(key, line);
    profile.points.push_back(std::move(r.point));
  }

  std::vector<LayerProfile> out;
  out.reserve(layers.size());
  for (auto& [index, profile] : layers) {
    std::stable_sort(profile.points.begin(), profile.points.end(), [](const OperatingPoint& a, const OperatingPoint& b) {
      const auto fa = a.hfo.sysclk();
      const auto fb = b.hfo.sysclk();
      return std::tie(a.g, fa, a.hfo) < std::tie(b.g, fb, b.hfo);
    });
    out.push_back(std::move(profile));
  }
  return out;
}

std::vector<LayerProfile> ingest_profiles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, fmt::format("cannot open profile file '{}'", path.string()));
  return ingest_profiles(in);
}

}  // namespace dvfs
