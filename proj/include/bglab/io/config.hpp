#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bglab/estimators.hpp"
#include "bglab/histogram.hpp"
#include "bglab/pair_correlation.hpp"
#include "bglab/sampler.hpp"
#include "bglab/sweep.hpp"
#include "bglab/system.hpp"

namespace bglab::io {

struct SamplerSection {
  long n = 0;  // total particle count, dimer members included
  double d = 0.0;
  double m = 1.0;
  double temperature = 1.0;
  Mode mode = Mode::standard_gas;
  int internal_pairs = 0;
  double internal_separation = 0.5;
  std::uint64_t max_attempts = 1'000'000;
};

struct SimulationSection {
  std::uint64_t max_events = 100'000;
  std::optional<double> max_time;  // absolute; unlimited when absent
  double snapshot_interval = 0.0;
  bool event_log = true;
  int ensemble = 1;
  std::uint64_t audit_interval = 10'000;
};

struct DiagnosticsSection {
  DepositPolicy policy = DepositPolicy::mask_all;
  RadialSpec radial;
  AfcSpec afc;
  double relax_mean_free_times = 0.0;
  double window_mean_free_times = 0.05;
  std::uint64_t collision_samples = 200'000;
  double collision_target_rel_error = 0.05;
  bool spatially_resolved_collision = false;
  double balance_tolerance = 0.25;
};

struct SweepSection {
  double k1 = 1.0;
  double k2 = 1.0;
  std::vector<long> counts{125, 250, 500};
  Mode mode = Mode::standard_gas;
  int ensemble = 16;
  double internal_fraction = 0.1;
  std::optional<int> fixed_internal_pairs;
  double thermal_variance = 1.0;
  double relax_mean_free_times = 0.0;
  double window_mean_free_times = 0.05;
  std::uint64_t max_events_per_member = 50'000'000;
  bool run_balance = true;
};

/// Fully resolved configuration document.
struct RunConfig {
  DomainGeometry geometry;
  SamplerSection sampler;
  SimulationSection simulation;
  GridSpec grid;  // grid.geometry mirrors `geometry`
  DiagnosticsSection diagnostics;
  SweepSection sweep;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  /// Paths of the values that were filled in from defaults.
  std::vector<std::string> defaulted;
};

/// Parses, defaults and validates. Throws ConfigError whose message carries
/// the line and column of a syntax error, the path of an unknown key, or
/// the path of the violated constraint.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Complete document with every value explicit; parse_config of the dump
/// gives back the same document.
nlohmann::ordered_json resolved_json(const RunConfig& config);

SamplerSpec sampler_spec(const RunConfig& config, std::uint64_t seed);
SweepSpec sweep_spec(const RunConfig& config, std::uint64_t seed);

}  // namespace bglab::io
