#pragma once

#include <span>
#include <vector>

#include "dvfs/cost_model.hpp"

namespace dvfs {

/// Non-dominated operating points of one layer, ascending latency and
/// strictly descending energy.
struct ParetoSet {
  int layer_index = 0;
  std::vector<OperatingPoint> points;
};

/// Total order used to break ties: latency, energy, g, HFO frequency, then
/// the remaining clock fields.
bool point_order_less(const OperatingPoint& a, const OperatingPoint& b);

/// Sort-then-scan frontier, O(n log n). Of points equal on both axes only
/// the first under point_order_less survives.
std::vector<OperatingPoint> pareto_filter(std::span<const OperatingPoint> points);

/// Throws EmptyProfile for a profile without points.
ParetoSet pareto_front(const LayerProfile& profile);

/// pareto_front over every layer, order preserved; layers run in parallel.
std::vector<ParetoSet> pareto_front_all(std::span<const LayerProfile> profiles);

}  // namespace dvfs
