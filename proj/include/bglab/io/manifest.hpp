#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace bglab::io {

/// Output directory that owns every file a run writes. Relative names that
/// would escape the directory are rejected, and files are written to a
/// temporary name first, then renamed into place.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  /// Throws IoError if `relative` is absolute or leaves the directory.
  std::filesystem::path resolve(const std::filesystem::path& relative) const;
  /// Atomic write; returns the absolute path.
  std::filesystem::path write(const std::filesystem::path& relative, std::string_view content) const;

 private:
  std::filesystem::path root_;
};

/// Streamed file inside an OutputDir; becomes visible under its final name
/// only on commit(). Uncommitted files are removed on destruction.
class AtomicFile {
 public:
  AtomicFile(const OutputDir& dir, const std::filesystem::path& relative);
  ~AtomicFile();
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  std::ostream& stream() { return out_; }
  void commit();

 private:
  std::filesystem::path target_;
  std::filesystem::path tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

struct FileEntry {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uint64_t bytes = 0;
};

/// Record of a complete run. Written last, so its presence marks the run
/// as finished.
struct RunManifest {
  std::string run_id;
  std::string created;  // UTC timestamp; the only field allowed to differ on replay
  std::string command;
  nlohmann::ordered_json config;
  std::uint64_t seed = 0;
  std::string version;
  int threads = 1;
  std::vector<std::string> defaulted;
  std::vector<FileEntry> files;
};

/// Deterministic id from command, resolved configuration and seed.
std::string make_run_id(const std::string& command, const nlohmann::ordered_json& config, std::uint64_t seed);
std::string utc_timestamp();

/// Digests the named files (relative to `dir`) into manifest.files.
void inventory(RunManifest& manifest, const OutputDir& dir, const std::vector<std::string>& files);

nlohmann::ordered_json manifest_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);
void write_manifest(const OutputDir& dir, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

/// Files whose digest in `dir` differs from the manifest entry.
std::vector<std::string> verify_manifest(const RunManifest& m, const std::filesystem::path& dir);

}  // namespace bglab::io
