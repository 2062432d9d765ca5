#include "bglab/io/snapshot.hpp"

#include <fstream>
#include <sstream>

#include "bglab/errors.hpp"

namespace bglab::io {
namespace {

using ojson = nlohmann::ordered_json;

ojson vec_json(const Vec3& v) { return ojson::array({v.x, v.y, v.z}); }

Vec3 vec_from(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw IoError(where + ": expected a 3-vector");
  Vec3 v;
  for (int k = 0; k < 3; ++k) {
    if (!j[k].is_number()) throw IoError(where + ": expected a 3-vector");
    v[k] = j[k].get<double>();
  }
  return v;
}

template <class T>
T field(const nlohmann::json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw IoError(where + ": missing \"" + key + "\"");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw IoError(where + ": bad value for \"" + key + "\"");
  }
}

}  // namespace

void persist_snapshot(const SystemConfig& config, std::ostream& out) {
  ojson header;
  header["format"] = "bglab-snapshot";
  header["n"] = config.size();
  header["d"] = config.d;
  header["m"] = config.m;
  header["geometry"] = {{"boundary", std::string(to_string(config.geometry.kind))},
                        {"lengths", vec_json(config.geometry.lengths)}};
  header["time"] = config.time;
  header["mode"] = std::string(to_string(config.mode));
  out << header.dump() << '\n';
  for (const auto& p : config.particles) {
    ojson line;
    line["id"] = p.id;
    line["r"] = vec_json(p.r);
    line["v"] = vec_json(p.v);
    out << line.dump() << '\n';
  }
  if (!out) throw IoError("snapshot: write failed");
}

std::string snapshot_text(const SystemConfig& config) {
  std::ostringstream out;
  persist_snapshot(config, out);
  return out.str();
}

SystemConfig load_snapshot(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw IoError("snapshot: truncated file (no header)");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(std::string("snapshot header: ") + e.what());
  }
  if (field<std::string>(header, "format", "snapshot header") != "bglab-snapshot")
    throw IoError("snapshot header: unknown format");
  SystemConfig cfg;
  const auto n = field<std::size_t>(header, "n", "snapshot header");
  cfg.d = field<double>(header, "d", "snapshot header");
  cfg.m = field<double>(header, "m", "snapshot header");
  cfg.time = field<double>(header, "time", "snapshot header");
  const auto mode = parse_mode(field<std::string>(header, "mode", "snapshot header"));
  if (!mode) throw IoError("snapshot header: unknown mode");
  cfg.mode = *mode;
  const auto& geo = header.at("geometry");
  const auto kind = parse_boundary(field<std::string>(geo, "boundary", "snapshot geometry"));
  if (!kind) throw IoError("snapshot geometry: unknown boundary");
  cfg.geometry.kind = *kind;
  cfg.geometry.lengths = vec_from(geo.at("lengths"), "snapshot geometry");

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = "snapshot line " + std::to_string(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw IoError(where + ": truncated or malformed particle record");
    }
    ParticleState p;
    p.id = field<int>(j, "id", where);
    p.r = vec_from(j.at("r"), where);
    p.v = vec_from(j.at("v"), where);
    p.sync_time = cfg.time;
    if (p.id != static_cast<int>(cfg.particles.size())) throw IoError(where + ": particle ids must be 0..N-1 in order");
    cfg.particles.push_back(p);
  }
  if (cfg.particles.size() != n)
    throw IoError("snapshot: count mismatch (header declares " + std::to_string(n) + " particles, file contains " +
                  std::to_string(cfg.particles.size()) + ")");
  return cfg;
}

SystemConfig load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read snapshot " + path.string());
  return load_snapshot(in);
}

nlohmann::ordered_json event_json(const EventRecord& e) {
  ojson j;
  j["t"] = e.time;
  j["kind"] = std::string(to_string(e.kind));
  j["a"] = e.participants[0];
  if (e.participants[1] >= 0) j["b"] = e.participants[1];
  if (e.wall_id >= 0) j["wall"] = e.wall_id;
  ojson before = ojson::array(), after = ojson::array();
  for (int k = 0; k < e.participant_count(); ++k) {
    before.push_back(vec_json(e.v_before[static_cast<std::size_t>(k)]));
    after.push_back(vec_json(e.v_after[static_cast<std::size_t>(k)]));
  }
  j["v_before"] = std::move(before);
  j["v_after"] = std::move(after);
  return j;
}

void EventLogWriter::operator()(const EventRecord& e) {
  out_ << event_json(e).dump() << '\n';
  ++written_;
}

}  // namespace bglab::io
