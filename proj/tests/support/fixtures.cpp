#include "fixtures.hpp"

#include <algorithm>
#include <limits>

namespace bglab::testing {

DomainGeometry unit_box(BoundaryKind kind) {
  DomainGeometry g;
  g.kind = kind;
  g.lengths = {1.0, 1.0, 1.0};
  return g;
}

SystemConfig make_config(const std::vector<std::pair<Vec3, Vec3>>& particles, double d, DomainGeometry geometry,
                         Mode mode) {
  SystemConfig c;
  c.d = d;
  c.m = 1.0;
  c.geometry = geometry;
  c.mode = mode;
  for (std::size_t i = 0; i < particles.size(); ++i)
    c.particles.push_back({static_cast<int>(i), particles[i].first, particles[i].second, 0.0});
  return c;
}

SystemConfig equilibrium_gas(int n, double d, std::uint64_t seed, BoundaryKind kind, double temperature) {
  SamplerSpec s;
  s.n_external = n;
  s.d = d;
  s.m = 1.0;
  s.temperature = temperature;
  s.seed = seed;
  s.geometry = unit_box(kind);
  return sample_system(s, Mode::standard_gas);
}

SystemConfig ideal_gas(int n, double d, std::uint64_t seed, double temperature) {
  SamplerSpec s;
  s.n_external = n;
  s.d = d;
  s.m = 1.0;
  s.temperature = temperature;
  s.seed = seed;
  s.geometry = unit_box();
  return sample_system(s, Mode::free_flow);
}

double min_external_distance(const SystemConfig& config, const std::vector<IdPair>& tethers) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < config.size(); ++i)
    for (std::size_t j = i + 1; j < config.size(); ++j) {
      const IdPair p = make_pair_ids(static_cast<int>(i), static_cast<int>(j));
      if (std::binary_search(tethers.begin(), tethers.end(), p)) continue;
      best = std::min(best, norm(config.geometry.displacement(config.particles[i].r, config.particles[j].r)));
    }
  return best;
}

}  // namespace bglab::testing
