#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bglab/histogram.hpp"
#include "bglab/rng.hpp"

namespace bglab {

/// Distribution the colliding velocities are drawn from. The mass is the
/// integral of the (unnormalized) density; draws come from the normalized
/// distribution and the collision term is scaled by mass^2.
class VelocitySource {
 public:
  static VelocitySource maxwellian(double variance, Vec3 mean = {}, double mass = 1.0);
  /// Weighted point set; weights must be non-negative.
  static VelocitySource points(std::vector<Vec3> velocities, std::vector<double> weights);
  /// Velocity marginal of a histogram, uniform within each velocity cell.
  /// Cells with negative weight are dropped.
  static VelocitySource velocity_marginal(const PhaseHistogram& f);
  /// Local velocity density in spatial cell s (mass = local spatial density).
  static VelocitySource spatial_cell(const PhaseHistogram& f, std::size_t s);

  double mass() const { return mass_; }
  Vec3 draw(CounterRng& rng) const;

 private:
  enum class Kind { maxwellian, points, cells };
  Kind kind_ = Kind::maxwellian;
  double sigma_ = 1.0;
  Vec3 mean_;
  double mass_ = 1.0;
  std::vector<Vec3> anchors_;  // points, or lower corners of cells
  double cell_width_ = 0.0;
  std::vector<double> cdf_;
};

struct CollisionOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t block_size = 1u << 16;
  /// The field is flagged when the standard error of its largest cell
  /// exceeds this fraction of that cell's value.
  double target_rel_error = 0.05;
};

struct MomentCheck {
  double value = 0.0;
  double error = 0.0;
  double roundoff = 0.0;
  bool consistent_with_zero() const { return std::abs(value) <= 3.0 * error + roundoff; }
};

/// Monte Carlo estimate of scale * C[f, f] averaged over velocity cells,
/// with C the hard-sphere collision operator under molecular chaos.
struct CollisionField {
  GridSpec grid;
  bool spatially_resolved = false;
  std::size_t spatial_cells = 1;
  std::vector<double> value;  // spatial_cells * velocity_cells
  std::vector<double> error;
  std::vector<std::uint64_t> hits;  // deposits that landed in each cell
  std::uint64_t samples = 0;
  double scale = 0.0;
  std::uint64_t overflow = 0;  // deposits outside the velocity grid
  std::array<MomentCheck, 5> moments{};  // mass, momentum x/y/z, energy |v|^2
  bool budget_insufficient = false;

  bool well_sampled(std::size_t cell, std::uint64_t threshold = PhaseHistogram::kWellSampled) const {
    return hits[cell] >= threshold;
  }
};

/// d^2 N / V: converts C[phi, phi] of the velocity marginal into the
/// time derivative of that marginal.
inline double collision_scale(double d, double n_particles, double volume) { return d * d * n_particles / volume; }

/// Parallel over sample blocks; block b draws from CounterRng(seed).split(b)
/// and blocks are reduced in index order, so the result does not depend on
/// the thread count.
CollisionField collision_integral_mc(const VelocitySource& source, const GridSpec& grid, double scale,
                                     const CollisionOptions& options);
/// Same blocks evaluated one after another.
CollisionField collision_integral_mc_reference(const VelocitySource& source, const GridSpec& grid, double scale,
                                               const CollisionOptions& options);

/// Velocity marginal of a normalized histogram; scale = d^2 N / V.
CollisionField collision_integral_mc(const PhaseHistogram& f, double d, double n_particles,
                                     const CollisionOptions& options);
/// Per spatial cell, using the local velocity density; scale = d^2 N.
CollisionField collision_integral_mc_resolved(const PhaseHistogram& f, double d, double n_particles,
                                              const CollisionOptions& options);

}  // namespace bglab
