#include "dvfs/mckp.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include <fmt/format.h>

#include "dvfs/errors.hpp"

namespace dvfs {

namespace {

constexpr std::size_t kMaxDpCells = 400'000'000;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest q with q * quantum >= t.
std::int64_t quanta_up(double t, double quantum) {
  auto q = static_cast<std::int64_t>(std::ceil(t / quantum));
  while (static_cast<double>(q) * quantum < t) ++q;
  return q;
}

// Largest q with q * quantum <= t.
std::int64_t quanta_down(double t, double quantum) {
  auto q = static_cast<std::int64_t>(std::floor(t / quantum));
  while (q > 0 && static_cast<double>(q) * quantum > t) --q;
  return q;
}

PlanSolution finish(const PlanProblem& p, std::vector<std::size_t> indices, bool feasible) {
  PlanSolution s;
  s.indices = std::move(indices);
  s.selection.reserve(p.classes.size());
  for (std::size_t k = 0; k < p.classes.size(); ++k) s.selection.push_back(p.classes[k].points[s.indices[k]]);
  const auto t = energy_of(s.selection);
  s.total_latency_us = t.latency_us;
  s.total_energy_uj = t.energy_uj;
  s.feasible = feasible;
  return s;
}

}  // namespace

void PlanProblem::validate() const {
  if (classes.empty()) throw InvalidProblem("plan problem has no layers");
  for (const auto& c : classes)
    if (c.points.empty()) throw InvalidProblem(fmt::format("layer {} has no candidate points", c.layer_index));
  if (!(qos_us > 0.0)) throw InvalidProblem("QoS budget must be positive");
  if (!(time_quantum_us > 0.0)) throw InvalidProblem("time quantum must be positive");
}

Totals energy_of(std::span<const OperatingPoint> selection) {
  Totals t;
  for (const auto& p : selection) {
    t.latency_us += p.latency_us;
    t.energy_uj += p.energy_uj;
  }
  return t;
}

PlanSolution fastest_selection(const PlanProblem& problem) {
  problem.validate();
  std::vector<std::size_t> idx(problem.classes.size());
  for (std::size_t k = 0; k < problem.classes.size(); ++k) {
    const auto& pts = problem.classes[k].points;
    std::size_t best = 0;
    for (std::size_t j = 1; j < pts.size(); ++j)
      if (pts[j].latency_us < pts[best].latency_us ||
          (pts[j].latency_us == pts[best].latency_us && pts[j].energy_uj < pts[best].energy_uj))
        best = j;
    idx[k] = best;
  }
  return finish(problem, std::move(idx), false);
}

PlanSolution solve_dp(const PlanProblem& problem) {
  problem.validate();
  const std::size_t n = problem.classes.size();
  const double quantum = problem.time_quantum_us;

  std::vector<std::vector<std::int64_t>> cost(n);
  std::int64_t min_needed = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    for (const auto& pt : problem.classes[k].points) {
      cost[k].push_back(quanta_up(pt.latency_us, quantum));
      lo = std::min(lo, cost[k].back());
    }
    min_needed += lo;
  }
  const std::int64_t budget = quanta_down(problem.qos_us, quantum);
  if (min_needed > budget) {
    auto s = fastest_selection(problem);
    s.feasible = false;
    return s;
  }

  const auto width = static_cast<std::size_t>(budget) + 1;
  if (n * width > kMaxDpCells)
    throw InvalidProblem(fmt::format("DP table of {} x {} cells is too large; raise the time quantum", n, width));

  // Suffix DP: row k holds the best plan for layers k..n-1 using at most b
  // quanta. Choosing from layer 0 last makes the smallest-index rule apply
  // from the first layer onward.
  struct Cell {
    double energy;
    double latency;
  };
  std::vector<Cell> next(width, Cell{0.0, 0.0});
  std::vector<Cell> cur(width);
  std::vector<std::uint16_t> choice(n * width);
  constexpr auto kNone = std::numeric_limits<std::uint16_t>::max();

  for (std::size_t kk = n; kk-- > 0;) {
    const auto& pts = problem.classes[kk].points;
    if (pts.size() >= kNone) throw InvalidProblem("class too large for the DP solver");
    for (std::size_t b = 0; b < width; ++b) {
      Cell best{kInf, kInf};
      std::uint16_t arg = kNone;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        const auto c = static_cast<std::size_t>(cost[kk][j]);
        if (c > b) continue;
        const Cell& rest = next[b - c];
        if (rest.energy == kInf) continue;
        const Cell cand{pts[j].energy_uj + rest.energy, pts[j].latency_us + rest.latency};
        if (cand.energy < best.energy || (cand.energy == best.energy && cand.latency < best.latency)) {
          best = cand;
          arg = static_cast<std::uint16_t>(j);
        }
      }
      cur[b] = best;
      choice[kk * width + b] = arg;
    }
    std::swap(cur, next);
  }

  std::vector<std::size_t> idx(n);
  auto b = static_cast<std::size_t>(budget);
  for (std::size_t k = 0; k < n; ++k) {
    const auto j = choice[k * width + b];
    idx[k] = j;
    b -= static_cast<std::size_t>(cost[k][j]);
  }
  auto s = finish(problem, std::move(idx), true);
  s.dp_cells = n * width;
  return s;
}

PlanSolution solve_exhaustive(const PlanProblem& problem, std::size_t max_combinations) {
  problem.validate();
  const std::size_t n = problem.classes.size();
  std::size_t combos = 1;
  for (const auto& c : problem.classes) {
    if (combos > max_combinations / c.points.size())
      throw InvalidProblem(fmt::format("more than {} assignments to enumerate", max_combinations));
    combos *= c.points.size();
  }

  std::vector<std::size_t> idx(n, 0);
  std::vector<std::size_t> best_idx;
  double best_energy = kInf;
  double best_latency = kInf;
  for (std::size_t iter = 0; iter < combos; ++iter) {
    double t = 0.0;
    double e = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      t += problem.classes[k].points[idx[k]].latency_us;
      e += problem.classes[k].points[idx[k]].energy_uj;
    }
    if (t <= problem.qos_us && (e < best_energy || (e == best_energy && t < best_latency))) {
      best_energy = e;
      best_latency = t;
      best_idx = idx;
    }
    // Odometer with the last layer fastest, so earlier layers stay minimal
    // among ties.
    for (std::size_t k = n; k-- > 0;) {
      if (++idx[k] < problem.classes[k].points.size()) break;
      idx[k] = 0;
    }
  }
  if (best_idx.empty()) return fastest_selection(problem);
  return finish(problem, std::move(best_idx), true);
}

}  // namespace dvfs
