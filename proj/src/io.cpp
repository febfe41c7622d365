#include "dvfs/io.hpp"

#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "dvfs/errors.hpp"

namespace dvfs {

using json = nlohmann::json;

namespace {

double non_negative(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(0, fmt::format("calibration is missing '{}'", key));
  if (!j[key].is_number()) throw ParseError(0, fmt::format("calibration '{}' must be a number", key));
  const double v = j[key].get<double>();
  if (!(v >= 0.0)) throw ParseError(0, fmt::format("calibration '{}' must be non-negative", key));
  return v;
}

template <class T>
T field(const json& j, const char* key, const char* where) {
  if (!j.contains(key) || j[key].is_null()) throw ParseError(0, fmt::format("{}: missing '{}'", where, key));
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw ParseError(0, fmt::format("{}: '{}' has the wrong type", where, key));
  }
}

std::pair<int, int> pair_field(const json& j, const char* key, const char* where) {
  const auto v = field<std::vector<int>>(j, key, where);
  if (v.size() != 2) throw ParseError(0, fmt::format("{}: '{}' must be [a, b]", where, key));
  return {v[0], v[1]};
}

}  // namespace

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::Depthwise:
      return "dw";
    case LayerKind::Pointwise:
      return "pw";
    case LayerKind::Other:
      break;
  }
  return "other";
}

LayerKind layer_kind_from_string(std::string_view s) {
  if (s == "dw") return LayerKind::Depthwise;
  if (s == "pw") return LayerKind::Pointwise;
  if (s == "other") return LayerKind::Other;
  throw InvalidConfig(fmt::format("unknown layer kind '{}'", s));
}

std::string_view to_string(IdlePolicy policy) {
  return policy == IdlePolicy::ClockGatedIdle ? "gated" : "constant";
}

IdlePolicy idle_policy_from_string(std::string_view s) {
  if (s == "gated") return IdlePolicy::ClockGatedIdle;
  if (s == "constant") return IdlePolicy::ConstantClockIdle;
  throw InvalidConfig(fmt::format("unknown idle policy '{}'", s));
}

json to_json(const ClockConfig& cfg) {
  if (!cfg.is_pll()) return {{"source", "hse"}, {"hse_mhz", cfg.hse_mhz()}};
  return {{"source", "pll"}, {"hse_mhz", cfg.hse_mhz()}, {"pllm", cfg.pllm()}, {"plln", cfg.plln()},
          {"pllp", cfg.pllp()}};
}

ClockConfig clock_config_from_json(const json& j) {
  const auto source = field<std::string>(j, "source", "clock config");
  const int hse = field<int>(j, "hse_mhz", "clock config");
  if (source == "hse") return ClockConfig::hse_direct(hse);
  if (source == "pll")
    return ClockConfig::pll(hse, field<int>(j, "pllm", "clock config"), field<int>(j, "plln", "clock config"),
                            j.value("pllp", 2));
  throw ParseError(0, fmt::format("clock config: unknown source '{}'", source));
}

json to_json(const SegmentPlan& plan) {
  return {{"iterations", plan.iterations}, {"mem_us", plan.mem_us}, {"compute_us", plan.compute_us}};
}

SegmentPlan segment_plan_from_json(const json& j) {
  SegmentPlan p;
  p.iterations = field<int>(j, "iterations", "segment plan");
  p.mem_us = field<double>(j, "mem_us", "segment plan");
  p.compute_us = field<double>(j, "compute_us", "segment plan");
  if (p.iterations < 0 || !(p.mem_us >= 0.0) || !(p.compute_us >= 0.0))
    throw ParseError(0, "segment plan values must be non-negative");
  return p;
}

Calibration calibration_from_json(const json& j) {
  if (!j.is_object()) throw ParseError(0, "calibration must be a JSON object");
  Calibration c;
  c.power.static_mw = non_negative(j, "static_mw");
  c.power.dynamic_mw_per_mhz = non_negative(j, "dynamic_mw_per_mhz");
  c.power.vco_penalty_mw_per_mhz = non_negative(j, "vco_penalty_mw_per_mhz");
  c.power.idle_mw_intercept = non_negative(j, "idle_mw_intercept");
  c.power.idle_mw_slope = non_negative(j, "idle_mw_slope");
  c.power.gated_idle_mw = non_negative(j, "gated_idle_mw");
  c.switching.pll_reconfigure_us = non_negative(j, "pll_reconfigure_us");
  c.switching.to_hse_us = non_negative(j, "to_hse_us");
  c.switching.switch_power_mw = non_negative(j, "switch_power_mw");
  c.power.validate();
  c.switching.validate();
  return c;
}

json to_json(const Calibration& c) {
  return {
      {"static_mw", c.power.static_mw},
      {"dynamic_mw_per_mhz", c.power.dynamic_mw_per_mhz},
      {"vco_penalty_mw_per_mhz", c.power.vco_penalty_mw_per_mhz},
      {"idle_mw_intercept", c.power.idle_mw_intercept},
      {"idle_mw_slope", c.power.idle_mw_slope},
      {"gated_idle_mw", c.power.gated_idle_mw},
      {"pll_reconfigure_us", c.switching.pll_reconfigure_us},
      {"to_hse_us", c.switching.to_hse_us},
      {"switch_power_mw", c.switching.switch_power_mw},
  };
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, fmt::format("cannot open '{}'", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(0, fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
  }
}

Calibration load_calibration(const std::filesystem::path& path) { return calibration_from_json(read_json_file(path)); }

std::vector<LayerSpec> network_from_json(const json& j) {
  if (!j.is_array()) throw ParseError(0, "network description must be a JSON array");
  std::vector<LayerSpec> layers;
  for (const auto& item : j) {
    LayerSpec l;
    l.index = field<int>(item, "index", "layer");
    try {
      l.kind = layer_kind_from_string(field<std::string>(item, "kind", "layer"));
    } catch (const InvalidConfig& e) {
      throw ParseError(0, e.what());
    }
    l.channels = field<int>(item, "channels", "layer");
    l.spatial = pair_field(item, "spatial", "layer");
    l.kernel = pair_field(item, "kernel", "layer");
    l.work_cycles = field<double>(item, "work_cycles", "layer");
    l.mem_cycles = field<double>(item, "mem_cycles", "layer");
    if (item.contains("dae_overhead")) {
      l.overhead.factor.clear();
      for (const auto& [k, v] : item["dae_overhead"].items()) {
        int g = 0;
        try {
          g = std::stoi(k);
        } catch (const std::exception&) {
          throw ParseError(0, fmt::format("layer {}: dae_overhead key '{}' is not an integer", l.index, k));
        }
        if (!is_valid_granularity(g)) throw ParseError(0, fmt::format("layer {}: dae_overhead g={}", l.index, g));
        l.overhead.factor[g] = v.get<double>();
      }
    }
    try {
      l.validate();
    } catch (const InvalidConfig& e) {
      throw ParseError(0, e.what());
    }
    layers.push_back(std::move(l));
  }
  for (std::size_t i = 1; i < layers.size(); ++i)
    if (layers[i].index <= layers[i - 1].index) throw ParseError(0, "network layers must have increasing indices");
  if (layers.empty()) throw ParseError(0, "network description has no layers");
  return layers;
}

std::vector<LayerSpec> load_network(const std::filesystem::path& path) { return network_from_json(read_json_file(path)); }

json to_json(const LayerSpec& l) {
  json overhead = json::object();
  for (const auto& [g, f] : l.overhead.factor) overhead[std::to_string(g)] = f;
  return {{"index", l.index},
          {"kind", to_string(l.kind)},
          {"channels", l.channels},
          {"spatial", {l.spatial.first, l.spatial.second}},
          {"kernel", {l.kernel.first, l.kernel.second}},
          {"work_cycles", l.work_cycles},
          {"mem_cycles", l.mem_cycles},
          {"dae_overhead", overhead}};
}

json profile_row(const OperatingPoint& p, LayerKind kind) {
  json row = {{"layer", p.layer_index}, {"kind", to_string(kind)}, {"g", p.g}, {"hse_mhz", p.hfo.hse_mhz()}};
  if (p.hfo.is_pll()) {
    row["pllm"] = p.hfo.pllm();
    row["plln"] = p.hfo.plln();
    if (p.hfo.pllp() != 2) row["pllp"] = p.hfo.pllp();
  } else {
    row["pllm"] = nullptr;
    row["plln"] = nullptr;
  }
  row["latency_us"] = p.latency_us;
  row["energy_uj"] = p.energy_uj;
  if (p.plan) row["plan"] = to_json(*p.plan);
  return row;
}

void write_profiles(std::ostream& out, std::span<const LayerProfile> profiles) {
  for (const auto& prof : profiles)
    for (const auto& p : prof.points) out << profile_row(p, prof.kind).dump() << '\n';
}

json to_json(const OperatingPoint& p) {
  json j = {{"layer", p.layer_index},     {"g", p.g},
            {"lfo", to_json(p.lfo)},      {"hfo", to_json(p.hfo)},
            {"hfo_mhz", p.hfo.sysclk().to_string()},
            {"latency_us", p.latency_us}, {"energy_uj", p.energy_uj}};
  if (p.plan) j["plan"] = to_json(*p.plan);
  return j;
}

OperatingPoint operating_point_from_json(const json& j) {
  OperatingPoint p;
  p.layer_index = field<int>(j, "layer", "schedule entry");
  p.g = field<int>(j, "g", "schedule entry");
  p.lfo = clock_config_from_json(field<json>(j, "lfo", "schedule entry"));
  p.hfo = clock_config_from_json(field<json>(j, "hfo", "schedule entry"));
  p.latency_us = field<double>(j, "latency_us", "schedule entry");
  p.energy_uj = field<double>(j, "energy_uj", "schedule entry");
  if (j.contains("plan") && !j["plan"].is_null()) p.plan = segment_plan_from_json(j["plan"]);
  return p;
}

json to_json(const SimReport& r) {
  json layers = json::array();
  for (const auto& l : r.per_layer)
    layers.push_back({{"layer", l.layer_index},
                      {"g", l.g},
                      {"hfo_mhz", l.hfo.sysclk().to_string()},
                      {"start_us", l.start_us},
                      {"latency_us", l.latency_us},
                      {"energy_active_uj", l.energy_active_uj},
                      {"energy_switch_uj", l.energy_switch_uj},
                      {"intra_switches", l.intra_switches},
                      {"inter_switches", l.inter_switches},
                      {"opaque", l.opaque}});
  return {{"qos_us", r.qos_us},
          {"active_latency_us", r.active_latency_us},
          {"idle_latency_us", r.idle_latency_us},
          {"energy_active_uj", r.energy_active_uj},
          {"energy_switch_uj", r.energy_switch_uj},
          {"energy_idle_uj", r.energy_idle_uj},
          {"energy_total_uj", r.energy_total_uj},
          {"switch_count", r.switch_count},
          {"qos_met", r.qos_met},
          {"planned_latency_us", r.planned_latency_us},
          {"inter_layer_switch_us", r.inter_layer_switch_us},
          {"idle_policy", to_string(r.idle_policy)},
          {"per_layer", layers}};
}

json to_json(const Schedule& s) {
  json entries = json::array();
  for (const auto& p : s.entries) entries.push_back(to_json(p));
  return {{"lfo", to_json(s.lfo)}, {"initial_config", to_json(s.initial_config)}, {"entries", entries}};
}

Schedule schedule_from_json(const json& j) {
  Schedule s;
  s.lfo = clock_config_from_json(field<json>(j, "lfo", "schedule"));
  s.initial_config = clock_config_from_json(field<json>(j, "initial_config", "schedule"));
  const auto entries = field<json>(j, "entries", "schedule");
  if (!entries.is_array()) throw ParseError(0, "schedule: 'entries' must be an array");
  for (const auto& e : entries) s.entries.push_back(operating_point_from_json(e));
  try {
    s.validate();
  } catch (const InvalidConfig& e) {
    throw ParseError(0, e.what());
  }
  return s;
}

void write_pareto_csv(std::ostream& out, std::span<const ParetoSet> fronts) {
  out << "layer,g,hfo_mhz,latency_us,energy_uj\n";
  for (const auto& f : fronts)
    for (const auto& p : f.points)
      out << fmt::format("{},{},{},{:.6f},{:.6f}\n", p.layer_index, p.g, p.hfo.sysclk().to_string(), p.latency_us,
                         p.energy_uj);
}

void write_comparison_csv(std::ostream& out, std::span<const ComparisonRow> rows) {
  out << "name,energy_total_uj,normalized,active_latency_us,qos_met\n";
  for (const auto& r : rows)
    out << fmt::format("{},{:.6f},{:.6f},{:.6f},{}\n", r.name, r.energy_total_uj, r.normalized, r.active_latency_us,
                       r.qos_met ? "true" : "false");
}

}  // namespace dvfs
