#include "bglab/io/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bglab/errors.hpp"

namespace bglab::io {
namespace {

using json = nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

// Walks one JSON object, remembering which keys were consumed so that
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json* node, std::string path, std::vector<std::string>& defaulted)
      : node_(node), path_(std::move(path)), defaulted_(defaulted) {
    if (node_ && !node_->is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  const json* find(const char* key) {
    seen_.insert(key);
    if (!node_) return nullptr;
    auto it = node_->find(key);
    if (it == node_->end() || it->is_null()) return nullptr;
    return &*it;
  }

  Section child(const char* key) { return Section(find(key), join(path_, key), defaulted_); }

  double number(const char* key, double def) {
    const json* v = find(key);
    if (!v) return defaulted(key), def;
    if (!v->is_number()) fail(join(path_, key), "expected a number");
    return v->get<double>();
  }
  std::optional<double> optional_number(const char* key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) fail(join(path_, key), "expected a number");
    return v->get<double>();
  }
  template <class Int>
  Int integer(const char* key, Int def) {
    const json* v = find(key);
    if (!v) return defaulted(key), def;
    return as_integer<Int>(*v, join(path_, key));
  }
  template <class Int>
  std::optional<Int> optional_integer(const char* key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return as_integer<Int>(*v, join(path_, key));
  }
  bool boolean(const char* key, bool def) {
    const json* v = find(key);
    if (!v) return defaulted(key), def;
    if (!v->is_boolean()) fail(join(path_, key), "expected true or false");
    return v->get<bool>();
  }
  std::string text(const char* key, const std::string& def) {
    const json* v = find(key);
    if (!v) return defaulted(key), def;
    if (!v->is_string()) fail(join(path_, key), "expected a string");
    return v->get<std::string>();
  }
  template <class Int, std::size_t K>
  std::array<Int, K> int_array(const char* key, std::array<Int, K> def) {
    const json* v = find(key);
    if (!v) return defaulted(key), def;
    if (!v->is_array() || v->size() != K) fail(join(path_, key), "expected an array of " + std::to_string(K) + " integers");
    std::array<Int, K> out{};
    for (std::size_t i = 0; i < K; ++i) out[i] = as_integer<Int>((*v)[i], join(path_, key));
    return out;
  }
  std::vector<long> long_list(const char* key, const std::vector<long>& def) {
    const json* v = find(key);
    if (!v) return defaulted(key), def;
    if (!v->is_array()) fail(join(path_, key), "expected an array of integers");
    std::vector<long> out;
    for (const auto& x : *v) out.push_back(as_integer<long>(x, join(path_, key)));
    return out;
  }

  void finish() const {
    if (!node_) return;
    for (auto it = node_->begin(); it != node_->end(); ++it)
      if (!seen_.count(it.key())) fail(join(path_, it.key()), "unknown key \"" + it.key() + "\"");
  }

  const std::string& path() const { return path_; }

 private:
  template <class Int>
  static Int as_integer(const json& v, const std::string& path) {
    if (v.is_number_unsigned() || v.is_number_integer()) {
      if constexpr (std::is_unsigned_v<Int>) {
        if (v.is_number_integer() && v.get<std::int64_t>() < 0) fail(path, "expected a non-negative integer");
      }
      return v.get<Int>();
    }
    if (v.is_number_float()) {
      const double x = v.get<double>();
      if (std::floor(x) == x && std::abs(x) < 9e15) return static_cast<Int>(x);
    }
    fail(path, "expected an integer");
  }
  void defaulted(const char* key) { defaulted_.push_back(join(path_, key)); }

  const json* node_;
  std::string path_;
  std::vector<std::string>& defaulted_;
  std::set<std::string> seen_;
};

Mode mode_from(const std::string& s, const std::string& path) {
  auto m = parse_mode(s);
  if (!m) fail(path, "unknown mode \"" + s + "\" (expected standard-gas, s_n-model or free-flow)");
  return *m;
}

std::string_view policy_name(DepositPolicy p) { return p == DepositPolicy::mask_all ? "mask_all" : "external_only"; }

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) fail(path, what);
}

void validate(const RunConfig& c) {
  for (int k = 0; k < 3; ++k) require(c.geometry.lengths[k] > 0.0, "geometry.lengths", "box edges must be > 0");
  if (c.sampler.n != 0 || c.sampler.d != 0.0) {
    require(c.sampler.n > 0, "sampler.n", "n must be > 0");
    require(c.sampler.d > 0.0, "sampler.d", "d must be > 0");
  }
  require(c.sampler.m > 0.0, "sampler.m", "m must be > 0");
  require(c.sampler.temperature >= 0.0, "sampler.temperature", "temperature must be >= 0");
  require(c.sampler.internal_pairs >= 0, "sampler.internal_pairs", "internal_pairs must be >= 0");
  require(2L * c.sampler.internal_pairs <= c.sampler.n, "sampler.internal_pairs", "more dimer members than particles");
  require(c.sampler.internal_separation > 0.0 && c.sampler.internal_separation < 1.0, "sampler.internal_separation",
          "internal_separation must be in (0, 1)");
  require(c.simulation.snapshot_interval >= 0.0, "simulation.snapshot_interval", "snapshot_interval must be >= 0");
  require(c.simulation.ensemble >= 1, "simulation.ensemble", "ensemble must be >= 1");
  require(c.simulation.audit_interval >= 1, "simulation.audit_interval", "audit_interval must be >= 1");
  if (c.simulation.max_time) require(*c.simulation.max_time >= 0.0, "simulation.max_time", "max_time must be >= 0");
  require(c.grid.velocity_bins >= 1, "grid.velocity_bins", "velocity_bins must be >= 1");
  for (int k = 0; k < 3; ++k) require(c.grid.spatial_bins[k] >= 1, "grid.spatial_bins", "spatial_bins must be >= 1");
  require(c.grid.v_max > 0.0, "grid.v_max", "v_max must be > 0");
  require(c.diagnostics.radial.bins >= 1, "diagnostics.radial_bins", "radial_bins must be >= 1");
  require(c.diagnostics.radial.r_max > 0.0, "diagnostics.r_max", "r_max must be > 0");
  require(c.diagnostics.afc.velocity_bins >= 1, "diagnostics.afc_velocity_bins", "afc_velocity_bins must be >= 1");
  require(c.diagnostics.window_mean_free_times > 0.0, "diagnostics.window_mean_free_times", "window must be > 0");
  require(c.diagnostics.relax_mean_free_times >= 0.0, "diagnostics.relax_mean_free_times", "relaxation must be >= 0");
  require(c.diagnostics.collision_samples >= 1, "diagnostics.collision_samples", "collision_samples must be >= 1");
  require(c.diagnostics.balance_tolerance > 0.0, "diagnostics.balance_tolerance", "balance_tolerance must be > 0");
  require(c.sweep.k1 > 0.0, "sweep.k1", "k1 must be > 0");
  require(c.sweep.k2 > 0.0, "sweep.k2", "k2 must be > 0");
  require(c.sweep.counts.size() >= 3, "sweep.counts", "at least 3 scaling points are required");
  for (std::size_t i = 0; i < c.sweep.counts.size(); ++i) {
    require(c.sweep.counts[i] > 0, "sweep.counts", "counts must be > 0");
    if (i > 0) require(c.sweep.counts[i] > c.sweep.counts[i - 1], "sweep.counts", "counts must strictly increase");
  }
  require(c.sweep.ensemble >= 1, "sweep.ensemble", "ensemble must be >= 1");
  require(c.sweep.internal_fraction >= 0.0 && c.sweep.internal_fraction < 1.0, "sweep.internal_fraction",
          "internal_fraction must be in [0, 1)");
  require(c.sweep.thermal_variance > 0.0, "sweep.thermal_variance", "thermal_variance must be > 0");
  require(c.sweep.window_mean_free_times > 0.0, "sweep.window_mean_free_times", "window must be > 0");
  require(!c.output_dir.empty(), "output.dir", "dir must not be empty");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream msg;
    msg << "parse error at line " << line << ", column " << column << ": " << e.what();
    throw ConfigError(msg.str());
  }

  RunConfig c;
  Section root(&doc, "", c.defaulted);

  {
    Section g = root.child("geometry");
    const std::string boundary = g.text("boundary", "periodic-box");
    const auto kind = parse_boundary(boundary);
    if (!kind) fail("geometry.boundary", "unknown boundary \"" + boundary + "\" (expected periodic-box or specular-box)");
    c.geometry.kind = *kind;
    const json* lengths = g.find("lengths");
    if (lengths) {
      if (!lengths->is_array() || lengths->size() != 3) fail("geometry.lengths", "expected an array of 3 numbers");
      for (int k = 0; k < 3; ++k) {
        if (!(*lengths)[k].is_number()) fail("geometry.lengths", "expected an array of 3 numbers");
        c.geometry.lengths[k] = (*lengths)[k].get<double>();
      }
    } else {
      c.defaulted.push_back("geometry.lengths");
    }
    g.finish();
  }
  {
    Section s = root.child("sampler");
    c.sampler.n = s.integer<long>("n", 0);
    c.sampler.d = s.number("d", 0.0);
    c.sampler.m = s.number("m", 1.0);
    c.sampler.temperature = s.number("temperature", 1.0);
    c.sampler.mode = mode_from(s.text("mode", "standard-gas"), "sampler.mode");
    c.sampler.internal_pairs = s.integer<int>("internal_pairs", 0);
    c.sampler.internal_separation = s.number("internal_separation", 0.5);
    c.sampler.max_attempts = s.integer<std::uint64_t>("max_attempts", 1'000'000);
    s.finish();
  }
  {
    Section s = root.child("simulation");
    c.simulation.max_events = s.integer<std::uint64_t>("max_events", 100'000);
    c.simulation.max_time = s.optional_number("max_time");
    c.simulation.snapshot_interval = s.number("snapshot_interval", 0.0);
    c.simulation.event_log = s.boolean("event_log", true);
    c.simulation.ensemble = s.integer<int>("ensemble", 1);
    c.simulation.audit_interval = s.integer<std::uint64_t>("audit_interval", 10'000);
    s.finish();
  }
  {
    Section s = root.child("grid");
    c.grid.spatial_bins = s.int_array<int, 3>("spatial_bins", {8, 8, 8});
    c.grid.velocity_bins = s.integer<int>("velocity_bins", 16);
    const auto vmax = s.optional_number("v_max");
    if (vmax) {
      c.grid.v_max = *vmax;
    } else {
      c.defaulted.push_back("grid.v_max");
      const double var = c.sampler.m > 0.0 ? c.sampler.temperature / c.sampler.m : 1.0;
      c.grid.v_max = 5.0 * std::sqrt(var > 0.0 ? var : 1.0);
    }
    s.finish();
  }
  c.grid.geometry = c.geometry;
  {
    Section s = root.child("diagnostics");
    const std::string policy = s.text("policy", "mask_all");
    if (policy == "mask_all") c.diagnostics.policy = DepositPolicy::mask_all;
    else if (policy == "external_only") c.diagnostics.policy = DepositPolicy::external_only;
    else fail("diagnostics.policy", "unknown policy \"" + policy + "\" (expected mask_all or external_only)");
    c.diagnostics.radial.bins = s.integer<int>("radial_bins", 50);
    c.diagnostics.radial.r_max = s.number("r_max", 0.25);
    c.diagnostics.afc.spatial_bins = s.int_array<int, 3>("afc_spatial_bins", {1, 1, 1});
    c.diagnostics.afc.velocity_bins = s.integer<int>("afc_velocity_bins", 2);
    c.diagnostics.afc.v_max = c.grid.v_max;
    c.diagnostics.relax_mean_free_times = s.number("relax_mean_free_times", 0.0);
    c.diagnostics.window_mean_free_times = s.number("window_mean_free_times", 0.05);
    c.diagnostics.collision_samples = s.integer<std::uint64_t>("collision_samples", 200'000);
    c.diagnostics.collision_target_rel_error = s.number("collision_target_rel_error", 0.05);
    c.diagnostics.spatially_resolved_collision = s.boolean("spatially_resolved_collision", false);
    c.diagnostics.balance_tolerance = s.number("balance_tolerance", 0.25);
    s.finish();
  }
  {
    Section s = root.child("sweep");
    c.sweep.k1 = s.number("k1", 1.0);
    c.sweep.k2 = s.number("k2", 1.0);
    c.sweep.counts = s.long_list("counts", {125, 250, 500});
    c.sweep.mode = mode_from(s.text("mode", "standard-gas"), "sweep.mode");
    c.sweep.ensemble = s.integer<int>("ensemble", 16);
    c.sweep.internal_fraction = s.number("internal_fraction", 0.1);
    c.sweep.fixed_internal_pairs = s.optional_integer<int>("fixed_internal_pairs");
    c.sweep.thermal_variance = s.number("thermal_variance", 1.0);
    c.sweep.relax_mean_free_times = s.number("relax_mean_free_times", 0.0);
    c.sweep.window_mean_free_times = s.number("window_mean_free_times", 0.05);
    c.sweep.max_events_per_member = s.integer<std::uint64_t>("max_events_per_member", 50'000'000);
    c.sweep.run_balance = s.boolean("run_balance", true);
    s.finish();
  }
  {
    Section s = root.child("output");
    c.output_dir = s.text("dir", "out");
    s.finish();
  }
  c.seed = root.integer<std::uint64_t>("seed", 0);
  root.finish();

  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

nlohmann::ordered_json resolved_json(const RunConfig& c) {
  using oj = nlohmann::ordered_json;
  oj doc;
  doc["geometry"] = {{"boundary", std::string(to_string(c.geometry.kind))},
                     {"lengths", {c.geometry.lengths.x, c.geometry.lengths.y, c.geometry.lengths.z}}};
  doc["sampler"] = {{"n", c.sampler.n},
                    {"d", c.sampler.d},
                    {"m", c.sampler.m},
                    {"temperature", c.sampler.temperature},
                    {"mode", std::string(to_string(c.sampler.mode))},
                    {"internal_pairs", c.sampler.internal_pairs},
                    {"internal_separation", c.sampler.internal_separation},
                    {"max_attempts", c.sampler.max_attempts}};
  doc["simulation"] = {{"max_events", c.simulation.max_events},
                       {"max_time", c.simulation.max_time ? oj(*c.simulation.max_time) : oj(nullptr)},
                       {"snapshot_interval", c.simulation.snapshot_interval},
                       {"event_log", c.simulation.event_log},
                       {"ensemble", c.simulation.ensemble},
                       {"audit_interval", c.simulation.audit_interval}};
  doc["grid"] = {{"spatial_bins", c.grid.spatial_bins}, {"velocity_bins", c.grid.velocity_bins}, {"v_max", c.grid.v_max}};
  doc["diagnostics"] = {{"policy", std::string(policy_name(c.diagnostics.policy))},
                        {"radial_bins", c.diagnostics.radial.bins},
                        {"r_max", c.diagnostics.radial.r_max},
                        {"afc_spatial_bins", c.diagnostics.afc.spatial_bins},
                        {"afc_velocity_bins", c.diagnostics.afc.velocity_bins},
                        {"relax_mean_free_times", c.diagnostics.relax_mean_free_times},
                        {"window_mean_free_times", c.diagnostics.window_mean_free_times},
                        {"collision_samples", c.diagnostics.collision_samples},
                        {"collision_target_rel_error", c.diagnostics.collision_target_rel_error},
                        {"spatially_resolved_collision", c.diagnostics.spatially_resolved_collision},
                        {"balance_tolerance", c.diagnostics.balance_tolerance}};
  doc["sweep"] = {{"k1", c.sweep.k1},
                  {"k2", c.sweep.k2},
                  {"counts", c.sweep.counts},
                  {"mode", std::string(to_string(c.sweep.mode))},
                  {"ensemble", c.sweep.ensemble},
                  {"internal_fraction", c.sweep.internal_fraction},
                  {"fixed_internal_pairs", c.sweep.fixed_internal_pairs ? oj(*c.sweep.fixed_internal_pairs) : oj(nullptr)},
                  {"thermal_variance", c.sweep.thermal_variance},
                  {"relax_mean_free_times", c.sweep.relax_mean_free_times},
                  {"window_mean_free_times", c.sweep.window_mean_free_times},
                  {"max_events_per_member", c.sweep.max_events_per_member},
                  {"run_balance", c.sweep.run_balance}};
  doc["output"] = {{"dir", c.output_dir}};
  doc["seed"] = c.seed;
  return doc;
}

SamplerSpec sampler_spec(const RunConfig& c, std::uint64_t seed) {
  if (c.sampler.n <= 0) throw ConfigError("sampler.n: required for this command");
  if (!(c.sampler.d > 0.0)) throw ConfigError("sampler.d: required for this command");
  const int pairs = c.sampler.mode == Mode::sn_model ? c.sampler.internal_pairs : 0;
  SamplerSpec s;
  s.n_internal_pairs = pairs;
  s.n_external = static_cast<int>(c.sampler.n) - 2 * pairs;
  s.internal_separation = c.sampler.internal_separation;
  s.temperature = c.sampler.temperature;
  s.seed = seed;
  s.geometry = c.geometry;
  s.d = c.sampler.d;
  s.m = c.sampler.m;
  s.max_attempts = c.sampler.max_attempts;
  s.allow_overlap = c.sampler.mode == Mode::free_flow;
  return s;
}

SweepSpec sweep_spec(const RunConfig& c, std::uint64_t seed) {
  SweepSpec s;
  s.k1 = c.sweep.k1;
  s.k2 = c.sweep.k2;
  s.geometry = c.geometry;
  s.counts = c.sweep.counts;
  s.mode = c.sweep.mode;
  s.internal_fraction = c.sweep.internal_fraction;
  s.fixed_internal_pairs = c.sweep.fixed_internal_pairs;
  s.internal_separation = c.sampler.internal_separation;
  s.ensemble = c.sweep.ensemble;
  s.thermal_variance = c.sweep.thermal_variance;
  s.relax_mean_free_times = c.sweep.relax_mean_free_times;
  s.window_mean_free_times = c.sweep.window_mean_free_times;
  s.max_events_per_member = c.sweep.max_events_per_member;
  s.grid = c.grid;
  s.radial = c.diagnostics.radial;
  s.afc = c.diagnostics.afc;
  s.policy = c.diagnostics.policy;
  s.run_balance = c.sweep.run_balance;
  s.collision.samples = c.diagnostics.collision_samples;
  s.collision.target_rel_error = c.diagnostics.collision_target_rel_error;
  s.seed = seed;
  return s;
}

}  // namespace bglab::io
