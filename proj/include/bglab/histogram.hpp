#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bglab/system.hpp"

namespace bglab {

/// Regular phase-space grid: spatial bins over the box [0, L_k] and velocity
/// bins over [-v_max, v_max]^3. Cell index = spatial * velocity_cells() +
/// velocity, both in x-fastest order.
struct GridSpec {
  std::array<int, 3> spatial_bins{8, 8, 8};
  int velocity_bins = 16;
  double v_max = 5.0;
  DomainGeometry geometry;

  std::size_t spatial_cells() const {
    return static_cast<std::size_t>(spatial_bins[0]) * spatial_bins[1] * spatial_bins[2];
  }
  std::size_t velocity_cells() const {
    const auto n = static_cast<std::size_t>(velocity_bins);
    return n * n * n;
  }
  std::size_t total() const { return spatial_cells() * velocity_cells(); }

  double spatial_width(int axis) const { return geometry.lengths[axis] / spatial_bins[axis]; }
  double velocity_width() const { return 2.0 * v_max / velocity_bins; }
  double spatial_cell_volume() const { return spatial_width(0) * spatial_width(1) * spatial_width(2); }
  double velocity_cell_volume() const {
    const double w = velocity_width();
    return w * w * w;
  }
  double cell_volume() const { return spatial_cell_volume() * velocity_cell_volume(); }

  /// Spatial bin of a position; positions on or past the upper edge are
  /// clamped into the last bin.
  std::size_t spatial_index(const Vec3& r) const;
  /// Velocity bin, or nothing when v lies outside [-v_max, v_max)^3.
  std::optional<std::size_t> velocity_index(const Vec3& v) const;
  std::optional<std::size_t> cell_index(const Vec3& r, const Vec3& v) const;

  std::array<int, 3> spatial_coords(std::size_t s) const;
  std::array<int, 3> velocity_coords(std::size_t w) const;
  std::size_t spatial_from_coords(const std::array<int, 3>& c) const;
  Vec3 spatial_center(std::size_t s) const;
  Vec3 velocity_center(std::size_t w) const;

  void validate() const;  // throws ContractViolation

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

enum class Normalization { probability_density, raw_counts };

/// Binned estimate of a one-particle density. Raw weights are integers so
/// that merges are exact and order independent; the normalized view divides
/// by the number of particle deposits and the cell volume.
struct PhaseHistogram {
  GridSpec grid;
  std::vector<std::int64_t> weight;     // summed deposit weights
  std::vector<std::int64_t> hits;       // number of deposits landing in the cell
  std::vector<std::int64_t> weight_sq;  // sum over members of (member cell weight)^2
  std::int64_t sample_count = 0;        // deposits attempted, including overflow
  std::int64_t ensemble_count = 0;
  std::int64_t overflow = 0;            // deposits outside the velocity grid
  Normalization normalization = Normalization::probability_density;

  PhaseHistogram() = default;
  explicit PhaseHistogram(const GridSpec& g);

  double density(std::size_t cell) const;
  /// Standard error of density(cell): from the spread across ensemble members
  /// when there are at least two, otherwise a Poisson estimate.
  double standard_error(std::size_t cell) const;
  bool well_sampled(std::size_t cell, std::int64_t threshold = kWellSampled) const {
    return hits[cell] >= threshold;
  }
  /// Sum of density times cell volume.
  double integral() const;
  double overflow_fraction() const {
    return sample_count > 0 ? static_cast<double>(overflow) / static_cast<double>(sample_count) : 0.0;
  }

  struct Deposit {
    std::size_t cell;
    std::int64_t weight;
  };
  /// Adds one ensemble member: `deposits` are the in-grid deposits of its
  /// `particle_count` particles, `overflow` the ones that fell outside.
  void add_member(std::span<const Deposit> deposits, std::int64_t particle_count, std::int64_t overflow_count);

  static constexpr std::int64_t kWellSampled = 25;

  friend bool operator==(const PhaseHistogram&, const PhaseHistogram&) = default;
};

/// Adds raw weights, sample and ensemble counts. Throws GridMismatch.
PhaseHistogram merge_estimates(const PhaseHistogram& a, const PhaseHistogram& b);

/// Warning text when more than 0.1% of deposits overflowed the grid.
std::optional<std::string> overflow_warning(const PhaseHistogram& h, std::string_view name);

}  // namespace bglab
