#include "bglab/balance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bglab/errors.hpp"

namespace bglab {

OverlapMagnitude overlap_magnitude(const PhaseHistogram& i2, std::int64_t min_hits) {
  OverlapMagnitude m;
  const double vol = i2.grid.cell_volume();
  for (std::size_t c = 0; c < i2.weight.size(); ++c) {
    const double v = i2.density(c);
    m.mass += v * vol;
    m.l1 += std::abs(v) * vol;
    if (i2.hits[c] >= min_hits) m.sup = std::max(m.sup, std::abs(v));
  }
  return m;
}

BalanceReport hierarchy_balance_report(const ResidualField& residual, const CollisionField& collision,
                                       std::span<const PhaseHistogram> i2_series, const BalanceOptions& options) {
  const GridSpec& g = residual.grid;
  const GridSpec& cg = collision.grid;
  if (g.velocity_bins != cg.velocity_bins || g.v_max != cg.v_max || !(g.geometry == cg.geometry))
    throw GridMismatch("hierarchy_balance_report: residual and collision grids differ");
  if (collision.spatially_resolved && g.spatial_bins != cg.spatial_bins)
    throw GridMismatch("hierarchy_balance_report: residual and collision grids differ");
  for (const auto& h : i2_series)
    if (!(h.grid == g)) throw GridMismatch("hierarchy_balance_report: overlap series grid differs");

  BalanceReport r;
  r.spatial_marginal = !collision.spatially_resolved;
  r.tolerance = options.tolerance;
  r.time = residual.time;
  r.dt = residual.dt;
  r.collision_scale = collision.scale;
  r.collision_samples = collision.samples;
  r.collision_budget_insufficient = collision.budget_insufficient;
  r.provenance = options.provenance;

  const std::size_t ns = g.spatial_cells();
  const std::size_t nv = g.velocity_cells();

  // Left-hand side on the comparison grid.
  std::vector<std::int64_t> hits;
  double cell_vol;
  if (r.spatial_marginal) {
    r.comparison_cells = nv;
    r.lhs.assign(nv, 0.0);
    r.lhs_error.assign(nv, 0.0);
    hits.assign(nv, 0);
    const double vs = g.spatial_cell_volume();
    for (std::size_t s = 0; s < ns; ++s)
      for (std::size_t w = 0; w < nv; ++w) {
        const std::size_t c = s * nv + w;
        r.lhs[w] += residual.value[c] * vs;
        r.lhs_error[w] += residual.error[c] * residual.error[c] * vs * vs;
        // analytic fields carry a very large sentinel count, so saturate
        hits[w] = residual.hits[c] > std::numeric_limits<std::int64_t>::max() - hits[w]
                      ? std::numeric_limits<std::int64_t>::max()
                      : hits[w] + residual.hits[c];
      }
    for (auto& e : r.lhs_error) e = std::sqrt(e);
    cell_vol = g.velocity_cell_volume();
  } else {
    r.comparison_cells = ns * nv;
    r.lhs = residual.value;
    r.lhs_error = residual.error;
    hits = residual.hits;
    cell_vol = g.cell_volume();
  }
  r.rhs = collision.value;
  r.rhs_error = collision.error;
  r.included.assign(r.comparison_cells, 0);

  for (std::size_t c = 0; c < r.comparison_cells; ++c) {
    if (hits[c] < options.min_hits) {
      ++r.excluded_cells;
      continue;
    }
    r.included[c] = 1;
    ++r.included_cells;
    const double diff = std::abs(r.lhs[c] - r.rhs[c]);
    r.sup_lhs = std::max(r.sup_lhs, std::abs(r.lhs[c]));
    r.sup_rhs = std::max(r.sup_rhs, std::abs(r.rhs[c]));
    r.sup_diff = std::max(r.sup_diff, diff);
    r.l1_lhs += std::abs(r.lhs[c]) * cell_vol;
    r.l1_rhs += std::abs(r.rhs[c]) * cell_vol;
    r.l1_diff += diff * cell_vol;
    r.noise_sup = std::max(r.noise_sup, 3.0 * std::hypot(r.lhs_error[c], r.rhs_error[c]));
  }
  r.relative_discrepancy = r.sup_rhs > 0.0 ? r.sup_diff / r.sup_rhs : (r.sup_diff > 0.0 ? INFINITY : 0.0);
  r.within_tolerance = r.included_cells > 0 && r.relative_discrepancy <= options.tolerance;
  r.within_noise = r.included_cells > 0 && r.sup_diff <= r.noise_sup;

  const double full_vol = g.cell_volume();
  for (std::size_t c = 0; c < residual.value.size(); ++c) {
    if (residual.hits[c] < options.min_hits) continue;
    ++r.masked_residual_cells;
    r.masked_residual_sup = std::max(r.masked_residual_sup, std::abs(residual.value[c]));
    r.masked_residual_l1 += std::abs(residual.value[c]) * full_vol;
    r.masked_residual_noise = std::max(r.masked_residual_noise, 3.0 * residual.error[c]);
  }

  for (const auto& h : i2_series) r.overlap_series.push_back(overlap_magnitude(h, options.min_hits));
  return r;
}

}  // namespace bglab
