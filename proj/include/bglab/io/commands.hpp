#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bglab/io/config.hpp"
#include "bglab/io/manifest.hpp"

namespace bglab::io {

/// Command names accepted by run_command and recorded in manifests.
inline constexpr const char* kCommands[] = {"simulate", "ensemble", "diagnose", "bg-sweep"};

/// Runs one pipeline into `dir` and writes the manifest last. All
/// randomness derives from `config.seed`. Throws ConfigError,
/// InvariantViolation or IoError.
RunManifest run_command(const std::string& command, const RunConfig& config, const OutputDir& dir, int threads);

struct ReplayResult {
  RunManifest original;
  RunManifest replayed;
  std::vector<std::string> mismatched;  // files whose digests differ or are missing
  bool identical() const { return mismatched.empty(); }
};

/// Re-executes the run recorded in `manifest_path` into `dir` and compares
/// every inventoried file by digest.
ReplayResult replay(const std::filesystem::path& manifest_path, const OutputDir& dir, int threads);

/// Validation messages for the initial state the configuration generates;
/// empty means valid.
std::vector<std::string> validate_run(const RunConfig& config);

}  // namespace bglab::io
