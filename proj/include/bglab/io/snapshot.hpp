#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "bglab/system.hpp"

namespace bglab::io {

/// JSON-lines snapshot: a header line with N, d, m, geometry, time and mode,
/// then one line {id, r, v} per particle. Doubles use the shortest decimal
/// that round-trips, so save -> load -> save is byte-identical.
void persist_snapshot(const SystemConfig& config, std::ostream& out);
std::string snapshot_text(const SystemConfig& config);
/// Throws IoError on malformed, truncated or count-mismatched input.
SystemConfig load_snapshot(std::istream& in);
SystemConfig load_snapshot(const std::filesystem::path& path);

/// One JSON line per processed collision.
nlohmann::ordered_json event_json(const EventRecord& e);

class EventLogWriter {
 public:
  explicit EventLogWriter(std::ostream& out) : out_(out) {}
  void operator()(const EventRecord& e);
  std::uint64_t written() const { return written_; }

 private:
  std::ostream& out_;
  std::uint64_t written_ = 0;
};

}  // namespace bglab::io
