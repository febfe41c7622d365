#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dvfs/pareto.hpp"

namespace dvfs {

/// Pick exactly one point per class, minimizing total energy subject to
/// total latency <= qos_us.
struct PlanProblem {
  std::vector<ParetoSet> classes;
  double qos_us = 0.0;
  double time_quantum_us = 10.0;

  /// Throws InvalidProblem on empty input, empty class or non-positive
  /// budget/quantum.
  void validate() const;
};

struct PlanSolution {
  std::vector<OperatingPoint> selection;
  std::vector<std::size_t> indices;  ///< chosen position inside each class
  double total_latency_us = 0.0;
  double total_energy_uj = 0.0;
  /// When false, `selection` is the fastest possible assignment instead.
  bool feasible = false;
  std::size_t dp_cells = 0;
};

struct Totals {
  double latency_us = 0.0;
  double energy_uj = 0.0;
};

/// Sums in selection order.
Totals energy_of(std::span<const OperatingPoint> selection);

/// Pseudo-polynomial DP over (layer, quantized budget). Latencies are
/// rounded up to whole quanta and the budget down, so a feasible answer
/// also meets qos_us on the unquantized latencies. Ties on energy go to
/// the lower true latency, then to the lexicographically smallest index
/// vector.
PlanSolution solve_dp(const PlanProblem& problem);

/// Enumerates every assignment without quantization. Throws InvalidProblem
/// when the product of class sizes exceeds `max_combinations`.
PlanSolution solve_exhaustive(const PlanProblem& problem, std::size_t max_combinations = 1'000'000);

/// Per-class fastest point; the diagnostic returned for infeasible budgets.
PlanSolution fastest_selection(const PlanProblem& problem);

}  // namespace dvfs
