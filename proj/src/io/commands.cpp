#include "bglab/io/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "bglab/balance.hpp"
#include "bglab/collision.hpp"
#include "bglab/errors.hpp"
#include "bglab/estimators.hpp"
#include "bglab/io/report.hpp"
#include "bglab/io/snapshot.hpp"
#include "bglab/pair_correlation.hpp"
#include "bglab/residual.hpp"
#include "bglab/rng.hpp"
#include "bglab/sampler.hpp"
#include "bglab/simulator.hpp"
#include "bglab/sweep.hpp"

namespace bglab::io {
namespace {

using oj = nlohmann::ordered_json;

std::string numbered(const char* prefix, std::size_t k, const char* suffix) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%05zu%s", prefix, k, suffix);
  return buf;
}

oj conservation_json(const SystemConfig& before, const SystemConfig& after) {
  const auto a = conserved_quantities(before);
  const auto b = conserved_quantities(after);
  const double scale = momentum_scale(before);
  const double e_drift = a.energy > 0.0 ? std::abs(b.energy - a.energy) / a.energy : std::abs(b.energy - a.energy);
  const double p_drift = scale > 0.0 ? norm(b.momentum - a.momentum) / scale : norm(b.momentum - a.momentum);
  return {{"energy_initial", a.energy},
          {"energy_final", b.energy},
          {"relative_energy_drift", e_drift},
          {"momentum_initial", {a.momentum.x, a.momentum.y, a.momentum.z}},
          {"momentum_final", {b.momentum.x, b.momentum.y, b.momentum.z}},
          {"relative_momentum_drift", p_drift}};
}

SystemConfig initial_state(const RunConfig& c, std::uint64_t seed) {
  return sample_system(sampler_spec(c, seed), c.sampler.mode);
}

std::vector<std::string> write_histograms(const OutputDir& dir, const KlimontovichEstimate& est) {
  std::vector<std::string> names;
  for (const auto& [stem, h] : {std::pair<std::string, const PhaseHistogram*>{"fhat", &est.fhat},
                                {"i2", &est.i2},
                                {"f1", &est.f1}}) {
    names.push_back(stem + "_histogram.csv");
    dir.write(names.back(), histogram_csv(*h));
    names.push_back(stem + "_histogram.json");
    dir.write(names.back(), histogram_header_json(*h, stem + "_histogram.csv").dump(2) + "\n");
  }
  return names;
}

std::vector<std::string> run_simulate(const RunConfig& c, const OutputDir& dir) {
  std::vector<std::string> files;
  const SystemConfig initial = initial_state(c, c.seed);
  dir.write("initial.jsonl", snapshot_text(initial));
  files.push_back("initial.jsonl");

  Simulator sim(initial, SimulatorOptions{c.simulation.audit_interval});
  std::optional<AtomicFile> log;
  std::optional<EventLogWriter> writer;
  if (c.simulation.event_log) {
    log.emplace(dir, "events.jsonl");
    writer.emplace(log->stream());
  }
  Sinks sinks;
  if (writer) sinks.on_event = [&writer](const EventRecord& e) { (*writer)(e); };
  std::vector<std::string> snaps;
  sinks.snapshot_interval = c.simulation.snapshot_interval;
  sinks.on_snapshot = [&](const SystemConfig& s) {
    const std::string name = numbered("snapshots/snapshot_", snaps.size(), ".jsonl");
    dir.write(name, snapshot_text(s));
    snaps.push_back(name);
  };
  Budget budget;
  budget.max_events = c.simulation.max_events;
  if (c.simulation.max_time) budget.max_time = *c.simulation.max_time;
  sim.run(budget, sinks);
  sim.audit();
  if (log) {
    log->commit();
    files.push_back("events.jsonl");
  }
  files.insert(files.end(), snaps.begin(), snaps.end());

  const SystemConfig final_state = sim.snapshot();
  dir.write("final.jsonl", snapshot_text(final_state));
  files.push_back("final.jsonl");

  const auto cls = classify_pairs(final_state);
  oj summary;
  summary["kind"] = "simulation-summary";
  summary["mode"] = std::string(to_string(c.sampler.mode));
  summary["n"] = final_state.size();
  summary["events"] = sim.events_processed();
  summary["final_time"] = sim.now();
  summary["conservation"] = conservation_json(initial, final_state);
  summary["occupation"] = {{"n_int", cls.n_int}, {"n_ext", cls.n_ext}, {"tethered_pairs", sim.tethered_pairs().size()}};
  summary["snapshots"] = snaps.size();
  dir.write("run_summary.json", summary.dump(2) + "\n");
  files.push_back("run_summary.json");
  return files;
}

std::vector<std::string> run_ensemble(const RunConfig& c, const OutputDir& dir) {
  const int members = c.simulation.ensemble;
  std::vector<SystemConfig> initial(static_cast<std::size_t>(members));
  std::vector<SystemConfig> final_states(static_cast<std::size_t>(members));
  std::vector<std::uint64_t> events(static_cast<std::size_t>(members), 0);
  std::vector<std::string> errors(static_cast<std::size_t>(members));
  Budget budget;
  budget.max_events = c.simulation.max_events;
  if (c.simulation.max_time) budget.max_time = *c.simulation.max_time;

#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < members; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      initial[i] = initial_state(c, derive_seed(c.seed, {static_cast<std::uint64_t>(k)}));
      Simulator sim(initial[i], SimulatorOptions{c.simulation.audit_interval});
      sim.run(budget);
      sim.audit();
      final_states[i] = sim.snapshot();
      events[i] = sim.events_processed();
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (int k = 0; k < members; ++k)
    if (!errors[static_cast<std::size_t>(k)].empty())
      throw InvariantViolation("member " + std::to_string(k) + ": " + errors[static_cast<std::size_t>(k)]);

  std::vector<std::string> files;
  auto per_member = oj::array();
  for (int k = 0; k < members; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const std::string name = numbered("ensemble/member_", i, ".jsonl");
    dir.write(name, snapshot_text(final_states[i]));
    files.push_back(name);
    per_member.push_back({{"member", k}, {"events", events[i]}, {"final_time", final_states[i].time},
                          {"conservation", conservation_json(initial[i], final_states[i])}});
  }
  const auto est = estimate_klimontovich(final_states, c.grid, c.sampler.d, c.diagnostics.policy);
  const auto hist = write_histograms(dir, est);
  files.insert(files.end(), hist.begin(), hist.end());

  oj summary;
  summary["kind"] = "ensemble-summary";
  summary["members"] = per_member;
  summary["grid"] = grid_json(c.grid);
  summary["fhat_mass"] = est.fhat.integral();
  summary["i2_mass"] = est.i2.integral();
  summary["f1_mass"] = est.f1.integral();
  summary["overflow_fraction"] = est.fhat.overflow_fraction();
  dir.write("ensemble_summary.json", summary.dump(2) + "\n");
  files.push_back("ensemble_summary.json");
  return files;
}

std::vector<std::string> run_diagnose(const RunConfig& c, const OutputDir& dir) {
  const SamplerSpec base = sampler_spec(c, c.seed);
  const double volume = c.geometry.volume();
  const double tau = mean_free_time(static_cast<double>(c.sampler.n) / volume, c.sampler.d,
                                    c.sampler.temperature / c.sampler.m);
  const double window = c.diagnostics.window_mean_free_times * tau;
  const double t0 = c.diagnostics.relax_mean_free_times * tau;
  auto ens = simulate_window(
      [&](int k) { return initial_state(c, derive_seed(c.seed, {static_cast<std::uint64_t>(k)})); },
      c.simulation.ensemble, t0, window, c.simulation.max_events);

  const double d = base.d;
  const auto before = estimate_klimontovich(ens.snapshots[0], c.grid, d, c.diagnostics.policy);
  const auto middle = estimate_klimontovich(ens.snapshots[1], c.grid, d, c.diagnostics.policy);
  const auto after = estimate_klimontovich(ens.snapshots[2], c.grid, d, c.diagnostics.policy);
  const std::array<PhaseHistogram, 3> f1_series{before.f1, middle.f1, after.f1};
  const std::array<PhaseHistogram, 3> i2_series{before.i2, middle.i2, after.i2};
  const auto residual = free_streaming_residual(f1_series, window, t0 + window);

  CollisionOptions co;
  co.samples = c.diagnostics.collision_samples;
  co.target_rel_error = c.diagnostics.collision_target_rel_error;
  co.seed = derive_seed(c.seed, {0xC0111DEull});
  const double n = static_cast<double>(c.sampler.n);
  const auto collision = c.diagnostics.spatially_resolved_collision
                             ? collision_integral_mc_resolved(middle.f1, d, n, co)
                             : collision_integral_mc(middle.f1, d, n, co);
  BalanceOptions bo;
  bo.tolerance = c.diagnostics.balance_tolerance;
  const auto balance = hierarchy_balance_report(residual, collision, i2_series, bo);
  const auto pc = estimate_pair_correlation(ens.snapshots[1], c.diagnostics.radial, c.diagnostics.afc);

  std::vector<std::string> files = emit_report(balance, dir);
  const auto hist = write_histograms(dir, middle);
  files.insert(files.end(), hist.begin(), hist.end());
  dir.write("pair_correlation.csv", pair_correlation_csv(pc.g));
  files.push_back("pair_correlation.csv");

  oj diag;
  diag["kind"] = "diagnostics";
  diag["mean_free_time"] = tau;
  diag["window"] = window;
  diag["diagnostic_time"] = t0 + window;
  diag["events"] = ens.events;
  diag["grid"] = grid_json(c.grid);
  diag["fhat_mass"] = middle.fhat.integral();
  diag["i2_mass"] = middle.i2.integral();
  diag["f1_mass"] = middle.f1.integral();
  diag["afc"] = to_json(pc.afc);
  diag["pair_correlation"] = to_json(pc.g);
  oj col = to_json(collision);
  col.erase("value");
  col.erase("error");
  diag["collision"] = col;
  dir.write("diagnostics.json", diag.dump(2) + "\n");
  files.push_back("diagnostics.json");
  return files;
}

std::vector<std::string> run_sweep_command(const RunConfig& c, const OutputDir& dir) {
  const auto report = run_bg_sweep(sweep_spec(c, c.seed));
  return emit_report(report, dir);
}

}  // namespace

RunManifest run_command(const std::string& command, const RunConfig& config, const OutputDir& dir, int threads) {
  RunManifest m;
  m.command = command;
  m.config = resolved_json(config);
  m.seed = config.seed;
  m.version = BGLAB_VERSION;
  m.threads = threads;
  m.defaulted = config.defaulted;
  m.run_id = make_run_id(command, m.config, m.seed);
  m.created = utc_timestamp();

  std::vector<std::string> files;
  if (command == "simulate") files = run_simulate(config, dir);
  else if (command == "ensemble") files = run_ensemble(config, dir);
  else if (command == "diagnose") files = run_diagnose(config, dir);
  else if (command == "bg-sweep") files = run_sweep_command(config, dir);
  else throw ConfigError("unknown command \"" + command + "\"");

  const std::string resolved = "resolved_config.json";
  dir.write(resolved, m.config.dump(2) + "\n");
  files.push_back(resolved);
  inventory(m, dir, files);
  write_manifest(dir, m);
  return m;
}

ReplayResult replay(const std::filesystem::path& manifest_path, const OutputDir& dir, int threads) {
  ReplayResult r;
  r.original = read_manifest(manifest_path);
  const RunConfig config = parse_config(r.original.config.dump());
  if (config.seed != r.original.seed) throw IoError("manifest seed disagrees with its configuration");
  r.replayed = run_command(r.original.command, config, dir, threads);
  for (const auto& f : r.original.files) {
    auto it = std::find_if(r.replayed.files.begin(), r.replayed.files.end(),
                           [&](const FileEntry& e) { return e.path == f.path; });
    if (it == r.replayed.files.end() || it->sha256 != f.sha256) r.mismatched.push_back(f.path);
  }
  for (const auto& f : r.replayed.files) {
    auto it = std::find_if(r.original.files.begin(), r.original.files.end(),
                           [&](const FileEntry& e) { return e.path == f.path; });
    if (it == r.original.files.end()) r.mismatched.push_back(f.path);
  }
  return r;
}

std::vector<std::string> validate_run(const RunConfig& config) {
  std::vector<std::string> out;
  const SystemConfig state = initial_state(config, config.seed);
  for (const auto& v : validate_configuration(state, config.sampler.mode)) out.push_back(v.code + ": " + v.message);
  return out;
}

}  // namespace bglab::io
