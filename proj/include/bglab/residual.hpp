#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bglab/histogram.hpp"

namespace bglab {

/// Density values with standard errors on a phase grid.
struct DensityField {
  GridSpec grid;
  std::vector<double> value;
  std::vector<double> error;
  std::vector<std::int64_t> hits;  // deposits behind each value; analytic fields use a large count

  static DensityField from_histogram(const PhaseHistogram& h);
  /// Samples f(r, v) at cell centers with zero error.
  static DensityField from_function(const GridSpec& grid, const std::function<double(const Vec3&, const Vec3&)>& f);
};

/// F1 f = df/dt + v . grad_r f evaluated cell-wise.
struct ResidualField {
  GridSpec grid;
  std::vector<double> value;
  std::vector<double> error;
  std::vector<std::int64_t> hits;  // support of the central field
  double time = 0.0;
  double dt = 0.0;
  std::array<double, 3> spacing{};

  bool well_sampled(std::size_t cell, std::int64_t threshold = PhaseHistogram::kWellSampled) const {
    return hits[cell] >= threshold;
  }
};

/// Central difference in time around the middle field of `series` (fields at
/// evenly spaced times, step dt) and second-order differences in space at the
/// velocity-cell centers. Periodic grids wrap; otherwise boundary cells use
/// one-sided stencils. Throws GridMismatch or ContractViolation.
ResidualField free_streaming_residual(std::span<const DensityField> series, double dt, double time = 0.0);
ResidualField free_streaming_residual(std::span<const PhaseHistogram> series, double dt, double time = 0.0);

}  // namespace bglab
