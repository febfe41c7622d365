#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "dvfs/clock_tree.hpp"
#include "dvfs/cost_model.hpp"
#include "dvfs/pareto.hpp"

namespace dvfs::test {

inline std::string data_path(const std::string& name) { return std::string(DVFS_DATA_DIR) + "/" + name; }

inline OperatingPoint point(double latency_us, double energy_uj, int g = 0, int plln = 216, int layer = 0) {
  OperatingPoint p;
  p.layer_index = layer;
  p.g = g;
  p.lfo = ClockConfig::hse_direct(50);
  p.hfo = ClockConfig::pll(50, 25, plln);
  p.latency_us = latency_us;
  p.energy_uj = energy_uj;
  return p;
}

/// O(n^2) dominance filter, the reference for pareto_filter.
inline std::vector<OperatingPoint> naive_front(const std::vector<OperatingPoint>& pts) {
  std::vector<OperatingPoint> keep;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < pts.size() && !drop; ++j) {
      if (i == j) continue;
      const auto& p = pts[i];
      const auto& q = pts[j];
      const bool weakly = q.latency_us <= p.latency_us && q.energy_uj <= p.energy_uj;
      const bool strictly = q.latency_us < p.latency_us || q.energy_uj < p.energy_uj;
      if (weakly && strictly) drop = true;
      // Exact duplicates on both axes: only the tie-order minimum survives.
      if (weakly && !strictly && point_order_less(q, p)) drop = true;
    }
    if (!drop) keep.push_back(pts[i]);
  }
  std::sort(keep.begin(), keep.end(), point_order_less);
  // Bitwise-identical points survive together above; collapse them.
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  return keep;
}

/// Random cloud on a coarse grid so that ties on either axis are common.
inline std::vector<OperatingPoint> random_cloud(std::mt19937_64& rng, std::size_t n) {
  static constexpr int kPlln[] = {75, 100, 150, 168, 216};
  std::uniform_int_distribution<int> lat(1, 200);
  std::uniform_int_distribution<int> en(1, 200);
  std::uniform_int_distribution<int> gi(0, 5);
  std::uniform_int_distribution<int> fi(0, 4);
  std::vector<OperatingPoint> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    pts.push_back(point(lat(rng) * 0.5, en(rng) * 0.25, kGranularities[static_cast<std::size_t>(gi(rng))],
                        kPlln[fi(rng)]));
  return pts;
}

}  // namespace dvfs::test

#include "dvfs/mckp.hpp"

namespace dvfs::test {

/// Random MCKP instance with integer latencies and dyadic energies, so every
/// sum is exact and a 1 us quantum cannot merge distinct latency profiles.
inline PlanProblem random_instance(std::mt19937_64& rng, int max_layers = 6, int max_points = 5) {
  std::uniform_int_distribution<int> layers(1, max_layers);
  std::uniform_int_distribution<int> count(1, max_points);
  std::uniform_int_distribution<int> lat(1, 100);
  std::uniform_int_distribution<int> en(1, 800);
  PlanProblem p;
  const int n = layers(rng);
  double lo = 0.0;
  double hi = 0.0;
  for (int k = 0; k < n; ++k) {
    ParetoSet c{k, {}};
    const int m = count(rng);
    double cmin = 1e300;
    double cmax = 0.0;
    for (int j = 0; j < m; ++j) {
      c.points.push_back(point(lat(rng), en(rng) / 16.0, kGranularities[static_cast<std::size_t>(j % 6)], 216, k));
      cmin = std::min(cmin, c.points.back().latency_us);
      cmax = std::max(cmax, c.points.back().latency_us);
    }
    lo += cmin;
    hi += cmax;
    p.classes.push_back(std::move(c));
  }
  // Budgets from just below the fastest plan to above the slowest.
  std::uniform_real_distribution<double> pick(lo - 5.0, hi + 5.0);
  p.qos_us = std::max(1.0, std::floor(pick(rng)));
  p.time_quantum_us = 1.0;
  return p;
}

}  // namespace dvfs::test
