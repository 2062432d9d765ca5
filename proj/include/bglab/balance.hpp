#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bglab/collision.hpp"
#include "bglab/histogram.hpp"
#include "bglab/residual.hpp"

namespace bglab {

struct BalanceOptions {
  double tolerance = 0.25;  // allowed sup|LHS - RHS| / sup|RHS|
  std::int64_t min_hits = PhaseHistogram::kWellSampled;
  std::vector<std::string> provenance;  // manifest ids of the inputs
};

/// Size of the overlap correction in one snapshot.
struct OverlapMagnitude {
  double mass = 0.0;  // integral of I2 over phase space
  double sup = 0.0;   // over well-sampled cells
  double l1 = 0.0;    // over all cells
};

struct BalanceReport {
  /// True when the collision field is the velocity marginal; the residual is
  /// then integrated over space before comparing.
  bool spatial_marginal = true;
  std::size_t comparison_cells = 0;
  std::vector<double> lhs;
  std::vector<double> lhs_error;
  std::vector<double> rhs;
  std::vector<double> rhs_error;
  std::vector<std::uint8_t> included;

  double sup_lhs = 0.0;
  double sup_rhs = 0.0;
  double sup_diff = 0.0;
  double l1_lhs = 0.0;
  double l1_rhs = 0.0;
  double l1_diff = 0.0;
  double relative_discrepancy = 0.0;  // sup_diff / sup_rhs
  /// Largest 3-sigma combined error over the included cells; a discrepancy
  /// below it is statistically indistinguishable from zero.
  double noise_sup = 0.0;
  double tolerance = 0.25;
  bool within_tolerance = false;
  bool within_noise = false;
  std::size_t included_cells = 0;
  std::size_t excluded_cells = 0;

  /// Residual of the masked one-particle density against zero on the full
  /// phase grid.
  double masked_residual_sup = 0.0;
  double masked_residual_l1 = 0.0;
  double masked_residual_noise = 0.0;
  std::size_t masked_residual_cells = 0;

  std::vector<OverlapMagnitude> overlap_series;

  double time = 0.0;
  double dt = 0.0;
  double collision_scale = 0.0;
  std::uint64_t collision_samples = 0;
  bool collision_budget_insufficient = false;
  std::vector<std::string> provenance;
};

OverlapMagnitude overlap_magnitude(const PhaseHistogram& i2, std::int64_t min_hits = PhaseHistogram::kWellSampled);

/// Cell-wise comparison of the free-streaming residual with the collision
/// term. Cells with fewer than min_hits deposits behind the residual are
/// excluded and counted. Throws GridMismatch when the grids differ.
BalanceReport hierarchy_balance_report(const ResidualField& residual, const CollisionField& collision,
                                       std::span<const PhaseHistogram> i2_series, const BalanceOptions& options = {});

}  // namespace bglab
