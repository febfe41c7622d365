#include "dvfs/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dvfs/errors.hpp"
#include "dvfs/pareto.hpp"
#include "dvfs/pipeline.hpp"

namespace dvfs::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Options {
  std::string out_dir = ".";
  std::string out;
  std::string calibration;
  std::string network;
  std::string profiles;
  std::string schedule;
  std::uint64_t seed = 0;
  double jitter_pct = 0.0;
  std::vector<int> hse{kLfoHseMhz};
  std::vector<int> pllm{kDefaultPllm.begin(), kDefaultPllm.end()};
  std::vector<int> plln{kDefaultPlln.begin(), kDefaultPlln.end()};
  int pllp = kDefaultPllp;
  std::vector<int> g_set{kGranularities.begin(), kGranularities.end()};
  int max_sysclk_mhz = kBaselineSysclkMhz;
  double mem_ceiling_mhz = 50.0;
  std::optional<double> vco_min;
  std::optional<double> vco_max;
  std::optional<double> qos_us;
  std::optional<double> qos_slack_pct;
  double quantum_us = 10.0;
  std::string idle;
  std::vector<double> slacks{10.0, 30.0, 50.0};
};

fs::path output_path(const Options& o, const std::string& fallback) {
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  return dir / (o.out.empty() ? fallback : o.out);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError(0, fmt::format("cannot write '{}'", path.string()));
  f << text;
}

Calibration calibration(const Options& o) { return o.calibration.empty() ? Calibration{} : load_calibration(o.calibration); }

SweepOptions sweep(const Options& o) {
  SweepOptions s;
  s.hse = o.hse;
  s.pllm = o.pllm;
  s.plln = o.plln;
  s.pllp = o.pllp;
  s.g_set = o.g_set;
  s.max_sysclk_mhz = o.max_sysclk_mhz;
  s.cost.mem_ceiling_mhz = o.mem_ceiling_mhz;
  return s;
}

std::vector<LayerProfile> load_profiles(const Options& o, const Calibration& calib) {
  if (o.network.empty() == o.profiles.empty())
    throw InvalidConfig("give exactly one profile source: --network or --profiles");
  if (!o.profiles.empty()) return ingest_profiles(fs::path(o.profiles));
  const auto layers = jitter_network(load_network(o.network), o.seed, o.jitter_pct);
  return synthesize_profiles(layers, calib, sweep(o));
}

void write_manifest(const Options& o, const std::string& command) {
  json m = {{"command", command},
            {"network", o.network.empty() ? json(nullptr) : json(o.network)},
            {"profiles", o.profiles.empty() ? json(nullptr) : json(o.profiles)},
            {"profile_source", o.profiles.empty() ? "synthetic" : "measured"},
            {"calibration", o.calibration.empty() ? json("builtin") : json(o.calibration)},
            {"qos_us", o.qos_us ? json(*o.qos_us) : json(nullptr)},
            {"qos_slack_pct", o.qos_slack_pct ? json(*o.qos_slack_pct) : json(nullptr)},
            {"quantum_us", o.quantum_us},
            {"out_dir", o.out_dir},
            {"seed", o.seed},
            {"jitter_pct", o.jitter_pct}};
  fs::create_directories(o.out_dir);
  write_text(fs::path(o.out_dir) / "manifest.json", m.dump(2) + "\n");
}

double resolve_qos(const Options& o, std::span<const LayerProfile> profiles) {
  if (o.qos_us) return *o.qos_us;
  if (o.qos_slack_pct) return qos_from_slack(profiles, *o.qos_slack_pct);
  throw InvalidConfig("give --qos-us or --qos-slack-pct");
}

void cmd_explore_clocks(const Options& o, std::ostream& out) {
  const auto calib = calibration(o);
  VcoRange vco;
  auto to_freq = [](double mhz) { return Frequency(static_cast<std::int64_t>(std::llround(mhz * 1000.0)), 1000); };
  if (o.vco_min) vco.min = to_freq(*o.vco_min);
  if (o.vco_max) vco.max = to_freq(*o.vco_max);
  const auto configs = enumerate_configs(o.hse, o.pllm, o.plln, o.pllp, vco);
  const auto groups = group_iso_frequency(std::span<const EnumeratedConfig>(configs));

  std::ostringstream csv;
  csv << "source,hse_mhz,pllm,plln,pllp,sysclk_mhz,vco_mhz,power_mw,min_power\n";
  for (const auto& e : configs) {
    const auto& group = groups.at(e.frequency);
    const bool chosen = min_power_config(e.frequency, group, calib.power) == e.config;
    csv << fmt::format("pll,{},{},{},{},{},{},{:.3f},{}\n", e.config.hse_mhz(), e.config.pllm(), e.config.plln(),
                       e.config.pllp(), e.frequency.to_string(), e.config.vco().to_string(),
                       calib.power.power_mw(e.config), chosen ? "true" : "false");
  }
  const auto path = output_path(o, "clocks.csv");
  write_text(path, csv.str());
  out << fmt::format("{} configurations, {} distinct frequencies -> {}\n", configs.size(), groups.size(),
                     path.string());
}

void cmd_synth_profiles(const Options& o, std::ostream& out) {
  if (o.network.empty()) throw InvalidConfig("--network is required");
  const auto calib = calibration(o);
  const auto profiles = load_profiles(o, calib);
  std::ostringstream text;
  write_profiles(text, profiles);
  const auto path = output_path(o, "profiles.jsonl");
  write_text(path, text.str());
  write_manifest(o, "synth-profiles");
  std::size_t points = 0;
  for (const auto& p : profiles) points += p.points.size();
  out << fmt::format("{} layers, {} operating points -> {}\n", profiles.size(), points, path.string());
}

void cmd_ingest(const Options& o, std::ostream& out) {
  if (o.profiles.empty()) throw InvalidConfig("--profiles is required");
  const auto profiles = ingest_profiles(fs::path(o.profiles));
  std::ostringstream text;
  write_profiles(text, profiles);
  const auto path = output_path(o, "profiles.normalized.jsonl");
  write_text(path, text.str());
  for (const auto& p : profiles)
    out << fmt::format("layer {} ({}): {} points\n", p.layer_index, to_string(p.kind), p.points.size());
}

void cmd_pareto(const Options& o, std::ostream& out) {
  const auto calib = calibration(o);
  const auto fronts = pareto_front_all(load_profiles(o, calib));
  std::ostringstream csv;
  write_pareto_csv(csv, fronts);
  const auto path = output_path(o, "pareto.csv");
  write_text(path, csv.str());
  out << csv.str();
}

int cmd_optimize(const Options& o, std::ostream& out) {
  const auto calib = calibration(o);
  const auto profiles = load_profiles(o, calib);
  const double qos = resolve_qos(o, profiles);
  const auto idle = idle_policy_from_string(o.idle.empty() ? "gated" : o.idle);
  const auto plan = plan_and_simulate(profiles, qos, o.quantum_us, calib, idle);

  json doc = to_json(plan.schedule);
  doc["qos_us"] = qos;
  doc["quantum_us"] = o.quantum_us;
  doc["idle_policy"] = to_string(idle);
  doc["feasible"] = plan.solution.feasible;
  doc["planned_energy_uj"] = plan.solution.total_energy_uj;
  doc["planned_latency_us"] = plan.solution.total_latency_us;
  doc["calibration"] = to_json(calib);
  doc["report"] = to_json(plan.report);
  write_text(output_path(o, "schedule.json"), doc.dump(2) + "\n");
  write_manifest(o, "optimize");
  out << to_json(plan.report).dump(2) << "\n";
  if (!plan.solution.feasible) {
    out << fmt::format("infeasible: QoS {:.3f} us, fastest achievable {:.3f} us\n", qos,
                       plan.solution.total_latency_us);
    return kExitInfeasible;
  }
  return kExitOk;
}

void cmd_simulate(const Options& o, std::ostream& out) {
  if (o.schedule.empty()) throw InvalidConfig("--schedule is required");
  const auto doc = read_json_file(o.schedule);
  const auto schedule = schedule_from_json(doc);
  Calibration calib;
  if (!o.calibration.empty())
    calib = load_calibration(o.calibration);
  else if (doc.contains("calibration"))
    calib = calibration_from_json(doc["calibration"]);
  double qos = 0.0;
  if (o.qos_us)
    qos = *o.qos_us;
  else if (doc.contains("qos_us"))
    qos = doc["qos_us"].get<double>();
  else
    throw InvalidConfig("schedule has no stored QoS; give --qos-us");
  const std::string idle_name = !o.idle.empty() ? o.idle : doc.value("idle_policy", std::string("gated"));
  const auto report = simulate(schedule, qos, calib.power, calib.switching, idle_policy_from_string(idle_name));
  const auto text = to_json(report).dump(2) + "\n";
  write_text(output_path(o, "report.json"), text);
  out << text;
}

void cmd_compare(const Options& o, std::ostream& out) {
  const auto calib = calibration(o);
  const auto profiles = load_profiles(o, calib);
  std::vector<ComparisonRow> rows;
  for (double slack : o.slacks) {
    const double qos = qos_from_slack(profiles, slack);
    const auto tag = fmt::format("@{:g}", slack);
    const auto planned = plan_and_simulate(profiles, qos, o.quantum_us, calib,
                                           idle_policy_from_string(o.idle.empty() ? "gated" : o.idle));
    const std::vector<std::pair<std::string, SimReport>> reports{
        {"baseline" + tag, baseline_constant(profiles, qos, calib.power, calib.switching)},
        {"gated" + tag, baseline_gated(profiles, qos, calib.power, calib.switching)},
        {"planned" + tag, planned.report},
    };
    const auto part = compare(reports);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  std::ostringstream csv;
  write_comparison_csv(csv, rows);
  write_text(output_path(o, "comparison.csv"), csv.str());
  write_manifest(o, "compare");
  out << csv.str();
}

void add_calibration(CLI::App* cmd, Options& o) {
  cmd->add_option("--calibration", o.calibration, "Calibration JSON (power model and switch costs)")
      ->check(CLI::ExistingFile);
}

void add_output(CLI::App* cmd, Options& o, const std::string& fallback) {
  cmd->add_option("--out-dir", o.out_dir, "Directory receiving every output file")->capture_default_str();
  cmd->add_option("--out", o.out, "Output file name, relative to --out-dir (default " + fallback + ")");
}

void add_source(CLI::App* cmd, Options& o) {
  auto* net = cmd->add_option("--network", o.network, "Network description JSON (synthetic profiles)")
                  ->check(CLI::ExistingFile);
  auto* prof = cmd->add_option("--profiles", o.profiles, "Measured profile file (JSON Lines)")->check(CLI::ExistingFile);
  net->excludes(prof);
  cmd->add_option("--seed", o.seed, "Seed for synthetic jitter")->capture_default_str();
  cmd->add_option("--jitter-pct", o.jitter_pct, "Per-layer cycle-count jitter, percent")->capture_default_str();
  cmd->add_option("--g-set", o.g_set, "Decoupling granularities")->delimiter(',');
  cmd->add_option("--pllm", o.pllm, "PLLM values")->delimiter(',');
  cmd->add_option("--plln", o.plln, "PLLN values")->delimiter(',');
  cmd->add_option("--max-sysclk-mhz", o.max_sysclk_mhz, "Drop HFO configs above this SYSCLK (<=0 keeps all)")
      ->capture_default_str();
  cmd->add_option("--mem-ceiling-mhz", o.mem_ceiling_mhz, "Clock above which memory segments stop speeding up")
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"DVFS planner for decoupled access-execute CNN layers on STM32-class MCUs", "dvfs_plan"};
  app.require_subcommand(1);

  auto* explore = app.add_subcommand("explore-clocks", "Enumerate PLL configurations with frequency and power");
  explore->add_option("--hse", o.hse, "HSE frequencies in MHz")->delimiter(',');
  explore->add_option("--pllm", o.pllm, "PLLM values")->delimiter(',');
  explore->add_option("--plln", o.plln, "PLLN values")->delimiter(',');
  explore->add_option("--pllp", o.pllp, "PLLP divider")->capture_default_str();
  explore->add_option("--vco-min", o.vco_min, "Minimum VCO output, MHz");
  explore->add_option("--vco-max", o.vco_max, "Maximum VCO output, MHz");
  add_calibration(explore, o);
  add_output(explore, o, "clocks.csv");

  auto* synth = app.add_subcommand("synth-profiles", "Synthesize operating points for a network");
  add_source(synth, o);
  add_calibration(synth, o);
  add_output(synth, o, "profiles.jsonl");

  auto* ingest = app.add_subcommand("ingest", "Validate and normalize a measured profile file");
  ingest->add_option("--profiles", o.profiles, "Measured profile file (JSON Lines)")->required()->check(CLI::ExistingFile);
  add_output(ingest, o, "profiles.normalized.jsonl");

  auto* pareto = app.add_subcommand("pareto", "Per-layer Pareto frontier as CSV");
  add_source(pareto, o);
  add_calibration(pareto, o);
  add_output(pareto, o, "pareto.csv");

  auto* optimize = app.add_subcommand("optimize", "Solve for the minimum-energy schedule under a QoS budget");
  add_source(optimize, o);
  add_calibration(optimize, o);
  add_output(optimize, o, "schedule.json");
  auto* qos = optimize->add_option("--qos-us", o.qos_us, "Latency budget in microseconds");
  auto* slack = optimize->add_option("--qos-slack-pct", o.qos_slack_pct, "Budget as percent over baseline latency");
  qos->excludes(slack);
  optimize->add_option("--quantum-us", o.quantum_us, "DP time quantum")->capture_default_str();
  optimize->add_option("--idle", o.idle, "Idle policy after the last layer: gated|constant (default gated)")
      ->check(CLI::IsMember({"gated", "constant"}));

  auto* sim = app.add_subcommand("simulate", "Re-simulate a stored schedule");
  sim->add_option("--schedule", o.schedule, "schedule.json from optimize")->required()->check(CLI::ExistingFile);
  sim->add_option("--qos-us", o.qos_us, "Override the stored QoS budget");
  sim->add_option("--idle", o.idle, "Override the stored idle policy")->check(CLI::IsMember({"gated", "constant"}));
  add_calibration(sim, o);
  add_output(sim, o, "report.json");

  auto* cmp = app.add_subcommand("compare", "Baseline, clock-gated baseline and planned energy at each QoS slack");
  add_source(cmp, o);
  add_calibration(cmp, o);
  add_output(cmp, o, "comparison.csv");
  cmp->add_option("--slack", o.slacks, "QoS slack percentages")->delimiter(',');
  cmp->add_option("--quantum-us", o.quantum_us, "DP time quantum")->capture_default_str();
  cmp->add_option("--idle", o.idle, "Idle policy of the planned schedule: gated|constant (default gated)")
      ->check(CLI::IsMember({"gated", "constant"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitInvalidInput;
  }

  try {
    if (*explore) cmd_explore_clocks(o, out);
    else if (*synth) cmd_synth_profiles(o, out);
    else if (*ingest) cmd_ingest(o, out);
    else if (*pareto) cmd_pareto(o, out);
    else if (*optimize) return cmd_optimize(o, out);
    else if (*sim) cmd_simulate(o, out);
    else if (*cmp) cmd_compare(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitOk;
}

}  // namespace dvfs::cli
