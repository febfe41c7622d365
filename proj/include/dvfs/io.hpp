#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dvfs/clock_tree.hpp"
#include "dvfs/cost_model.hpp"
#include "dvfs/pareto.hpp"
#include "dvfs/schedule_sim.hpp"

namespace dvfs {

/// Power and switch-cost coefficients as stored in a calibration file.
struct Calibration {
  PowerModel power;
  SwitchCostModel switching;
};

std::string_view to_string(LayerKind kind);
/// "dw" | "pw" | "other"; throws InvalidConfig otherwise.
LayerKind layer_kind_from_string(std::string_view s);
std::string_view to_string(IdlePolicy policy);
IdlePolicy idle_policy_from_string(std::string_view s);

nlohmann::json to_json(const ClockConfig& cfg);
ClockConfig clock_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SegmentPlan& plan);
SegmentPlan segment_plan_from_json(const nlohmann::json& j);

/// Every key is required and must be a non-negative number.
Calibration calibration_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Calibration& c);
Calibration load_calibration(const std::filesystem::path& path);

/// Network description: JSON array of layer objects.
std::vector<LayerSpec> network_from_json(const nlohmann::json& j);
std::vector<LayerSpec> load_network(const std::filesystem::path& path);
nlohmann::json to_json(const LayerSpec& layer);

/// One profile-file row per point. `kind` comes from the owning profile.
nlohmann::json profile_row(const OperatingPoint& p, LayerKind kind);
void write_profiles(std::ostream& out, std::span<const LayerProfile> profiles);

nlohmann::json to_json(const OperatingPoint& p);
OperatingPoint operating_point_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SimReport& r);
nlohmann::json to_json(const Schedule& s);
Schedule schedule_from_json(const nlohmann::json& j);

/// CSV: layer,g,hfo_mhz,latency_us,energy_uj
void write_pareto_csv(std::ostream& out, std::span<const ParetoSet> fronts);
/// CSV: name,energy_total_uj,normalized,active_latency_us,qos_met
void write_comparison_csv(std::ostream& out, std::span<const ComparisonRow> rows);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace dvfs
