#pragma once

#include <span>
#include <vector>

#include "bglab/histogram.hpp"
#include "bglab/system.hpp"

namespace bglab {

/// Which particles contribute to the masked one-particle estimate.
enum class DepositPolicy {
  mask_all,       // every particle deposits with weight 1 - neighbor_count
  external_only,  // particles with any neighbor closer than d are skipped entirely
};

/// #{j != i : |r_i - r_j| < d} for every particle, via a cell list.
std::vector<int> neighbor_counts(const SystemConfig& config, double d);
/// Same quantity by direct enumeration of all pairs.
std::vector<int> neighbor_counts_reference(const SystemConfig& config, double d);

/// The unmasked density fhat, the overlap correction I2 and the masked
/// density f1 = fhat - I2, built in one pass so that the identity holds
/// cell by cell. All three share the normalization constant (number of
/// particle deposits).
struct KlimontovichEstimate {
  PhaseHistogram fhat;
  PhaseHistogram i2;
  PhaseHistogram f1;
};

/// Members are processed in parallel and reduced in member order.
KlimontovichEstimate estimate_klimontovich(std::span<const SystemConfig> snapshots, const GridSpec& grid, double d,
                                           DepositPolicy policy = DepositPolicy::mask_all);
/// Serial implementation over brute-force neighbor counts.
KlimontovichEstimate estimate_klimontovich_reference(std::span<const SystemConfig> snapshots, const GridSpec& grid,
                                                     double d, DepositPolicy policy = DepositPolicy::mask_all);

PhaseHistogram estimate_fhat(std::span<const SystemConfig> snapshots, const GridSpec& grid);
PhaseHistogram estimate_I2(std::span<const SystemConfig> snapshots, const GridSpec& grid, double d);
PhaseHistogram estimate_f1_masked(std::span<const SystemConfig> snapshots, const GridSpec& grid, double d,
                                  DepositPolicy policy = DepositPolicy::mask_all);

}  // namespace bglab
