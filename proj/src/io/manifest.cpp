#include "bglab/io/manifest.hpp"

#include <unistd.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "bglab/errors.hpp"
#include "bglab/io/digest.hpp"

namespace bglab::io {

namespace fs = std::filesystem;

OutputDir::OutputDir(fs::path root) {
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create output directory " + root.string() + ": " + ec.message());
  root_ = fs::weakly_canonical(fs::absolute(root));
}

fs::path OutputDir::resolve(const fs::path& relative) const {
  if (relative.is_absolute()) throw IoError("refusing absolute output path " + relative.string());
  const fs::path full = (root_ / relative).lexically_normal();
  const auto rel = full.lexically_relative(root_);
  if (rel.empty() || *rel.begin() == "..") throw IoError("refusing to write outside " + root_.string());
  return full;
}

fs::path OutputDir::write(const fs::path& relative, std::string_view content) const {
  const fs::path target = resolve(relative);
  std::error_code ec;
  fs::create_directories(target.parent_path(), ec);
  if (ec) throw IoError("cannot create " + target.parent_path().string());
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename into " + target.string() + ": " + ec.message());
  return target;
}

AtomicFile::AtomicFile(const OutputDir& dir, const fs::path& relative) : target_(dir.resolve(relative)) {
  std::error_code ec;
  fs::create_directories(target_.parent_path(), ec);
  if (ec) throw IoError("cannot create " + target_.parent_path().string());
  tmp_ = target_;
  tmp_ += ".tmp." + std::to_string(::getpid());
  out_.open(tmp_, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot write " + tmp_.string());
}

AtomicFile::~AtomicFile() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    fs::remove(tmp_, ec);
  }
}

void AtomicFile::commit() {
  out_.flush();
  if (!out_) throw IoError("write failed for " + tmp_.string());
  out_.close();
  std::error_code ec;
  fs::rename(tmp_, target_, ec);
  if (ec) throw IoError("cannot rename into " + target_.string() + ": " + ec.message());
  committed_ = true;
}

std::string make_run_id(const std::string& command, const nlohmann::ordered_json& config, std::uint64_t seed) {
  return sha256_hex(command + "\n" + config.dump() + "\n" + std::to_string(seed)).substr(0, 16);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void inventory(RunManifest& manifest, const OutputDir& dir, const std::vector<std::string>& files) {
  for (const auto& f : files) {
    const fs::path p = dir.resolve(f);
    manifest.files.push_back({f, sha256_file(p), static_cast<std::uint64_t>(fs::file_size(p))});
  }
}

nlohmann::ordered_json manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["run_id"] = m.run_id;
  j["created"] = m.created;
  j["command"] = m.command;
  j["version"] = m.version;
  j["seed"] = m.seed;
  j["threads"] = m.threads;
  j["config"] = m.config;
  j["defaulted"] = m.defaulted;
  auto files = nlohmann::ordered_json::array();
  for (const auto& f : m.files) files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  j["files"] = std::move(files);
  return j;
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  try {
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.created = j.at("created").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.threads = j.at("threads").get<int>();
    m.config = j.at("config");
    m.defaulted = j.at("defaulted").get<std::vector<std::string>>();
    for (const auto& f : j.at("files"))
      m.files.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>(), f.at("bytes").get<std::uint64_t>()});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed manifest: ") + e.what());
  }
}

void write_manifest(const OutputDir& dir, const RunManifest& m) { dir.write("manifest.json", manifest_json(m).dump(2) + "\n"); }

RunManifest read_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read manifest " + path.string());
  try {
    return manifest_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(std::string("malformed manifest: ") + e.what());
  }
}

std::vector<std::string> verify_manifest(const RunManifest& m, const fs::path& dir) {
  std::vector<std::string> bad;
  for (const auto& f : m.files) {
    const fs::path p = dir / f.path;
    std::error_code ec;
    if (!fs::exists(p, ec) || sha256_file(p) != f.sha256) bad.push_back(f.path);
  }
  return bad;
}

}  // namespace bglab::io
