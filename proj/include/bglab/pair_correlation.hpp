#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "bglab/system.hpp"

namespace bglab {

struct RadialSpec {
  int bins = 50;
  double r_max = 0.25;
};

/// Pair-distance counts over [0, r_max] accumulated across an ensemble.
struct PairHistogram {
  RadialSpec spec;
  std::vector<std::int64_t> counts;
  double pair_norm = 0.0;  // sum over members of N(N-1)/2 / V
  std::int64_t ensemble_count = 0;

  double bin_width() const { return spec.r_max / spec.bins; }
  double lower_edge(int b) const { return b * bin_width(); }
  double center(int b) const { return (b + 0.5) * bin_width(); }
  /// Expected count of an uncorrelated (ideal-gas) ensemble in bin b.
  double ideal_expectation(int b) const;
  double g(int b) const;
  double g_error(int b) const;
  bool indeterminate(int b) const { return counts[static_cast<std::size_t>(b)] < 25; }
};

/// Coarse one-particle partition used for the factorization check.
struct AfcSpec {
  std::array<int, 3> spatial_bins{1, 1, 1};
  int velocity_bins = 2;
  double v_max = 5.0;
  double floor = 1e-12;
  std::int64_t min_count = 25;
};

/// max over determinate coarse bin pairs (a, b) of |f2 - f1 f1| / max(f1 f1, floor)
/// with f2 the ordered-pair probability and f1 the one-particle probability.
struct AfcResult {
  double metric = 0.0;
  /// 4 times the largest per-bin relative standard deviation expected for
  /// an exactly factorized ensemble.
  double noise_bound = 0.0;
  int determinate_bins = 0;
  int indeterminate_bins = 0;
  std::vector<std::int64_t> one_particle_counts;  // per coarse bin
  std::vector<std::int64_t> pair_counts;          // per ordered coarse-bin pair
};

struct PairCorrelationResult {
  PairHistogram g;
  AfcResult afc;
};

PairCorrelationResult estimate_pair_correlation(std::span<const SystemConfig> snapshots, const RadialSpec& radial,
                                                const AfcSpec& afc = {});
PairCorrelationResult estimate_pair_correlation_reference(std::span<const SystemConfig> snapshots,
                                                          const RadialSpec& radial, const AfcSpec& afc = {});

}  // namespace bglab
