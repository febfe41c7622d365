// Times the OpenMP grid synthesis and per-layer frontier extraction
// against their serial references on a replicated fixture network.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include <omp.h>

#include "dvfs/io.hpp"
#include "dvfs/pareto.hpp"
#include "dvfs/pipeline.hpp"

using namespace dvfs;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

bool same(const std::vector<LayerProfile>& a, const std::vector<LayerProfile>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].layer_index != b[i].layer_index || a[i].points != b[i].points) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const int copies = argc > 1 ? std::atoi(argv[1]) : 50;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 5;

  const auto base = load_network(DVFS_DATA_DIR "/fixture_network.json");
  const auto cal = load_calibration(DVFS_DATA_DIR "/calibration_default.json");

  std::vector<LayerSpec> layers;
  for (int c = 0; c < copies; ++c) {
    for (auto l : jitter_network(base, static_cast<std::uint64_t>(c), 10.0)) {
      l.index = static_cast<int>(layers.size());
      layers.push_back(l);
    }
  }

  const SweepOptions opts;
  const auto hfo = hfo_candidates(opts);
  const auto lfo = ClockConfig::hse_direct(kLfoHseMhz);

  std::vector<LayerProfile> par, ser;
  const double t_par = best_of(reps, [&] {
    par = build_profile_grid(layers, opts.g_set, hfo, lfo, cal.power, cal.switching);
  });
  const double t_ser = best_of(reps, [&] {
    ser = build_profile_grid_serial(layers, opts.g_set, hfo, lfo, cal.power, cal.switching);
  });

  std::vector<ParetoSet> fp, fs;
  const double f_par = best_of(reps, [&] { fp = pareto_front_all(par); });
  const double f_ser = best_of(reps, [&] {
    fs.clear();
    for (const auto& p : ser) fs.push_back(pareto_front(p));
  });
  bool fronts_equal = fp.size() == fs.size();
  for (std::size_t i = 0; fronts_equal && i < fp.size(); ++i) fronts_equal = fp[i].points == fs[i].points;

  std::size_t points = 0;
  for (const auto& p : par) points += p.points.size();

  std::printf("threads %d, layers %zu, points %zu\n", omp_get_max_threads(), layers.size(), points);
  std::printf("%-10s %12s %12s %8s %s\n", "kernel", "serial ms", "openmp ms", "speedup", "match");
  std::printf("%-10s %12.3f %12.3f %8.2f %s\n", "grid", t_ser, t_par, t_ser / t_par, same(par, ser) ? "yes" : "NO");
  std::printf("%-10s %12.3f %12.3f %8.2f %s\n", "pareto", f_ser, f_par, f_ser / f_par, fronts_equal ? "yes" : "NO");
  return same(par, ser) && fronts_equal ? 0 : 1;
}
