#include "dvfs/pareto.hpp"

#include <algorithm>
#include <tuple>

#include <fmt/format.h>

#include "dvfs/errors.hpp"

namespace dvfs {

bool point_order_less(const OperatingPoint& a, const OperatingPoint& b) {
  const auto fa = a.hfo.sysclk();
  const auto fb = b.hfo.sysclk();
  return std::tie(a.latency_us, a.energy_uj, a.g, fa, a.hfo, a.lfo, a.layer_index) <
         std::tie(b.latency_us, b.energy_uj, b.g, fb, b.hfo, b.lfo, b.layer_index);
}

std::vector<OperatingPoint> pareto_filter(std::span<const OperatingPoint> points) {
  std::vector<const OperatingPoint*> order;
  order.reserve(points.size());
  for (const auto& p : points) order.push_back(&p);
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) { return point_order_less(*a, *b); });

  std::vector<OperatingPoint> front;
  for (const auto* p : order)
    if (front.empty() || p->energy_uj < front.back().energy_uj) front.push_back(*p);
  return front;
}

ParetoSet pareto_front(const LayerProfile& profile) {
  if (profile.points.empty()) throw EmptyProfile(fmt::format("layer {} has no operating points", profile.layer_index));
  return {profile.layer_index, pareto_filter(profile.points)};
}

std::vector<ParetoSet> pareto_front_all(std::span<const LayerProfile> profiles) {
  for (const auto& p : profiles)
    if (p.points.empty()) throw EmptyProfile(fmt::format("layer {} has no operating points", p.layer_index));
  std::vector<ParetoSet> out(profiles.size());
  const auto n = static_cast<std::ptrdiff_t>(profiles.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = pareto_front(profiles[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace dvfs
