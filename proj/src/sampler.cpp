#include "bglab/sampler.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bglab/cell_list.hpp"
#include "bglab/dynamics.hpp"
#include "bglab/errors.hpp"
#include "bglab/rng.hpp"

namespace bglab {
namespace {

// Cell index of already placed centers for overlap rejection.
class OverlapIndex {
 public:
  OverlapIndex(const DomainGeometry& g, double d, std::size_t expected)
      : geometry_(g), d_(d), grid_(g, d, expected), members_(grid_.total()) {}

  void insert(const Vec3& r, int id) {
    const int c = grid_.index(grid_.coord_of(r));
    members_[c].push_back(static_cast<int>(points_.size()));
    points_.push_back(r);
    ids_.push_back(id);
  }

  // true if r is at distance >= d from every stored point except `skip_id`
  bool clear(const Vec3& r, int skip_id = -1) {
    grid_.neighbors(grid_.index(grid_.coord_of(r)), cells_);
    const double d2 = d_ * d_;
    for (int c : cells_)
      for (int k : members_[c])
        if (ids_[k] != skip_id && norm2(geometry_.displacement(r, points_[k])) < d2) return false;
    return true;
  }

 private:
  DomainGeometry geometry_;
  double d_;
  CellGrid grid_;
  std::vector<std::vector<int>> members_;
  std::vector<Vec3> points_;
  std::vector<int> ids_;
  std::vector<int> cells_;
};

Vec3 uniform_point(CounterRng& rng, const DomainGeometry& g, double margin) {
  Vec3 r;
  for (int k = 0; k < 3; ++k) r[k] = margin + (g.lengths[k] - 2.0 * margin) * rng.uniform();
  return r;
}

Vec3 unit_vector(CounterRng& rng) {
  std::normal_distribution<double> gauss;
  while (true) {
    Vec3 n{gauss(rng), gauss(rng), gauss(rng)};
    const double len = norm(n);
    if (len > 1e-12) return n * (1.0 / len);
  }
}

bool contained(const Vec3& r, const DomainGeometry& g, double margin) {
  for (int k = 0; k < 3; ++k)
    if (r[k] < margin || r[k] > g.lengths[k] - margin) return false;
  return true;
}

void check_spec(const SamplerSpec& spec) {
  if (!(spec.d > 0.0)) throw ContractViolation("sampler: d must be > 0");
  if (!(spec.m > 0.0)) throw ContractViolation("sampler: m must be > 0");
  if (!(spec.geometry.volume() > 0.0)) throw ContractViolation("sampler: volume must be > 0");
  if (spec.n_external < 0 || spec.n_internal_pairs < 0) throw ContractViolation("sampler: negative particle count");
  if (!spec.geometry.periodic()) {
    for (int k = 0; k < 3; ++k)
      if (!(spec.geometry.lengths[k] > spec.d)) throw ContractViolation("sampler: box edge must exceed d");
  }
}

void check_packing(const SamplerSpec& spec) {
  const std::size_t n = static_cast<std::size_t>(spec.n_external) + 2 * static_cast<std::size_t>(spec.n_internal_pairs);
  const double eta = conventional_volume_fraction(n, spec.d, spec.geometry.volume());
  if (!spec.allow_overlap && eta > kMaxPackingFraction) {
    std::ostringstream msg;
    msg << "packing-infeasible: volume fraction " << eta << " exceeds " << kMaxPackingFraction;
    throw PackingInfeasible(msg.str());
  }
}

}  // namespace

double conventional_volume_fraction(std::size_t n, double d, double volume) {
  return static_cast<double>(n) * (std::numbers::pi / 6.0) * d * d * d / volume;
}

SystemConfig sample_external_gas(const SamplerSpec& spec) {
  check_spec(spec);
  check_packing(spec);
  SystemConfig cfg;
  cfg.d = spec.d;
  cfg.m = spec.m;
  cfg.geometry = spec.geometry;
  cfg.mode = spec.allow_overlap ? Mode::free_flow : Mode::standard_gas;
  cfg.particles.reserve(static_cast<std::size_t>(spec.n_external) + 2 * static_cast<std::size_t>(spec.n_internal_pairs));

  CounterRng rng = CounterRng(spec.seed).split(1);
  const double margin = spec.geometry.periodic() ? 0.0 : 0.5 * spec.d;
  OverlapIndex index(spec.geometry, spec.d, static_cast<std::size_t>(spec.n_external));
  std::uint64_t rejections = 0;
  for (int i = 0; i < spec.n_external; ++i) {
    while (true) {
      const Vec3 r = uniform_point(rng, spec.geometry, margin);
      if (spec.allow_overlap || index.clear(r)) {
        index.insert(r, i);
        cfg.particles.push_back({i, r, Vec3{}, 0.0});
        break;
      }
      if (++rejections >= spec.max_attempts) {
        std::ostringstream msg;
        msg << "packing-infeasible: " << rejections << " rejections after placing " << i << " particles";
        throw PackingInfeasible(msg.str());
      }
    }
  }
  return cfg;
}

SystemConfig sample_internal_clusters(const SamplerSpec& spec, SystemConfig base) {
  check_spec(spec);
  if (!(spec.internal_separation > 0.0 && spec.internal_separation < 1.0))
    throw ContractViolation("sampler: internal_separation must lie in (0, 1)");
  check_packing(spec);

  base.d = spec.d;
  base.m = spec.m;
  base.geometry = spec.geometry;
  base.mode = Mode::sn_model;
  const double half = 0.5 * spec.internal_separation * spec.d;
  const double margin = spec.geometry.periodic() ? 0.0 : 0.5 * spec.d;

  OverlapIndex index(spec.geometry, spec.d, base.particles.size() + 2 * static_cast<std::size_t>(spec.n_internal_pairs));
  for (const auto& p : base.particles) index.insert(p.r, p.id);

  CounterRng rng = CounterRng(spec.seed).split(2);
  std::uint64_t rejections = 0;
  for (int k = 0; k < spec.n_internal_pairs; ++k) {
    while (true) {
      const Vec3 centre = uniform_point(rng, spec.geometry, margin);
      const Vec3 axis = unit_vector(rng);
      const Vec3 a = spec.geometry.wrap(centre + axis * half);
      const Vec3 b = spec.geometry.wrap(centre - axis * half);
      const bool inside = spec.geometry.periodic() || (contained(a, spec.geometry, margin) && contained(b, spec.geometry, margin));
      if (inside && index.clear(a) && index.clear(b)) {
        const int ia = static_cast<int>(base.particles.size());
        base.particles.push_back({ia, a, Vec3{}, base.time});
        base.particles.push_back({ia + 1, b, Vec3{}, base.time});
        index.insert(a, ia);
        index.insert(b, ia + 1);
        break;
      }
      if (++rejections >= spec.max_attempts) {
        std::ostringstream msg;
        msg << "packing-infeasible: " << rejections << " rejections after placing " << k << " dimers";
        throw PackingInfeasible(msg.str());
      }
    }
  }
  return base;
}

SystemConfig sample_maxwellian_velocities(SystemConfig config, double temperature, std::uint64_t seed) {
  if (!(temperature >= 0.0)) throw ContractViolation("sample_maxwellian_velocities: temperature must be >= 0");
  auto& ps = config.particles;
  if (ps.empty()) return config;
  const double sigma = std::sqrt(temperature / config.m);
  CounterRng rng = CounterRng(seed).split(3);
  std::normal_distribution<double> gauss;
  Vec3 sum;
  for (auto& p : ps) {
    p.v = Vec3{sigma * gauss(rng), sigma * gauss(rng), sigma * gauss(rng)};
    sum += p.v;
  }
  const Vec3 mean = sum * (1.0 / static_cast<double>(ps.size()));
  Vec3 rest;
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    ps[i].v -= mean;
    rest += ps[i].v;
  }
  // the last velocity closes the sum to exactly zero
  ps.back().v = -rest;
  return config;
}

SystemConfig sample_two_beam_velocities(SystemConfig config, double beam_speed, double beam_sigma,
                                        std::uint64_t seed) {
  if (!(beam_sigma >= 0.0) || !std::isfinite(beam_speed))
    throw ContractViolation("sample_two_beam_velocities: invalid beam parameters");
  auto& ps = config.particles;
  CounterRng rng = CounterRng(seed).split(4);
  std::normal_distribution<double> gauss;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    ps[i].v = Vec3{sign * beam_speed + beam_sigma * gauss(rng), beam_sigma * gauss(rng), beam_sigma * gauss(rng)};
  }
  return config;
}

SystemConfig sample_system(const SamplerSpec& spec, Mode mode) {
  SamplerSpec s = spec;
  if (mode == Mode::free_flow) s.allow_overlap = true;
  SystemConfig cfg = sample_external_gas(s);
  if (mode == Mode::sn_model) cfg = sample_internal_clusters(s, std::move(cfg));
  cfg.mode = mode;
  return sample_maxwellian_velocities(std::move(cfg), s.temperature, s.seed);
}

std::vector<Violation> validate_configuration(const SystemConfig& config, Mode mode) {
  std::vector<Violation> out;
  auto add = [&out](std::string code, std::string msg) { out.push_back({std::move(code), std::move(msg)}); };
  const auto& g = config.geometry;
  const double d = config.d;

  if (!(d > 0.0)) add("parameter", "d must be > 0");
  if (!(config.m > 0.0)) add("parameter", "m must be > 0");
  for (int k = 0; k < 3; ++k)
    if (!(g.lengths[k] > 0.0)) add("geometry", "box edges must be positive");
  if (!g.periodic() && d > 0.0)
    for (int k = 0; k < 3; ++k)
      if (!(g.lengths[k] > d)) add("geometry", "specular box edge must exceed d");
  if (mode != Mode::free_flow && config.size() < 2) add("size", "N must be at least 2");
  if (!out.empty()) return out;

  const double margin = g.periodic() ? 0.0 : 0.5 * d;
  for (std::size_t i = 0; i < config.size(); ++i) {
    const auto& p = config.particles[i];
    if (p.id != static_cast<int>(i)) add("id", "particle " + std::to_string(i) + " has id " + std::to_string(p.id));
    if (!is_finite(p.r) || !is_finite(p.v)) {
      add("non-finite", "particle " + std::to_string(i) + " has a non-finite component");
      continue;
    }
    bool inside = true;
    for (int k = 0; k < 3; ++k) {
      if (g.periodic()) {
        inside = inside && p.r[k] >= 0.0 && p.r[k] < g.lengths[k];
      } else {
        inside = inside && p.r[k] >= margin && p.r[k] <= g.lengths[k] - margin;
      }
    }
    if (!inside) add("containment", "particle " + std::to_string(i) + " lies outside the admissible region");
  }

  const PairClassification cls = classify_pairs(config);
  if (mode == Mode::standard_gas) {
    for (const auto& [a, b] : cls.mutually_internal) {
      add("overlap", "pair (" + std::to_string(a) + "," + std::to_string(b) + ") closer than d");
    }
  } else if (mode == Mode::sn_model) {
    if (cls.n_int == 0) add("N_int = 0", "s_n-model requires at least one internal particle");
    if (cls.n_ext == 0) add("N_ext = 0", "s_n-model requires at least one external particle");
  }
  return out;
}

}  // namespace bglab
