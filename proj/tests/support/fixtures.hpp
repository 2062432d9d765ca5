#pragma once

#include <cstdint>
#include <vector>

#include "bglab/sampler.hpp"
#include "bglab/system.hpp"

namespace bglab::testing {

DomainGeometry unit_box(BoundaryKind kind = BoundaryKind::periodic_box);

/// Configuration from explicit (position, velocity) pairs.
SystemConfig make_config(const std::vector<std::pair<Vec3, Vec3>>& particles, double d,
                         DomainGeometry geometry = unit_box(), Mode mode = Mode::standard_gas);

/// Non-overlapping equilibrium gas of n spheres in the unit box.
SystemConfig equilibrium_gas(int n, double d, std::uint64_t seed, BoundaryKind kind = BoundaryKind::periodic_box,
                             double temperature = 1.0);

/// Ideal-gas positions (overlaps allowed), Maxwellian velocities, free flow.
SystemConfig ideal_gas(int n, double d, std::uint64_t seed, double temperature = 1.0);

/// Smallest pair distance (minimum image) over pairs that are not tethered.
double min_external_distance(const SystemConfig& config, const std::vector<IdPair>& tethers);

}  // namespace bglab::testing
