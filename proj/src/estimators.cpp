#include "bglab/estimators.hpp"

#include <iostream>

#include "bglab/cell_list.hpp"

namespace bglab {
namespace {

struct MemberDeposits {
  std::vector<PhaseHistogram::Deposit> fhat, i2, f1;
  std::int64_t particles = 0;
  std::int64_t overflow = 0;
};

MemberDeposits deposit_member(const SystemConfig& snap, const GridSpec& grid, const std::vector<int>& nbr,
                              DepositPolicy policy) {
  MemberDeposits out;
  out.fhat.reserve(snap.size());
  out.i2.reserve(snap.size());
  out.f1.reserve(snap.size());
  for (std::size_t i = 0; i < snap.size(); ++i) {
    const int k = nbr[i];
    if (policy == DepositPolicy::external_only && k > 0) continue;
    ++out.particles;
    const auto& p = snap.particles[i];
    const auto cell = grid.cell_index(p.r, p.v);
    if (!cell) {
      ++out.overflow;
      continue;
    }
    out.fhat.push_back({*cell, 1});
    out.i2.push_back({*cell, k});
    out.f1.push_back({*cell, 1 - k});
  }
  return out;
}

void accumulate(KlimontovichEstimate& est, const MemberDeposits& m) {
  est.fhat.add_member(m.fhat, m.particles, m.overflow);
  est.i2.add_member(m.i2, m.particles, m.overflow);
  est.f1.add_member(m.f1, m.particles, m.overflow);
}

void warn_overflow(const KlimontovichEstimate& est) {
  if (auto w = overflow_warning(est.fhat, "phase histogram")) std::clog << "warning: " << *w << '\n';
}

}  // namespace

std::vector<int> neighbor_counts(const SystemConfig& config, double d) {
  const std::size_t n = config.size();
  std::vector<int> out(n, 0);
  const CellGrid grid(config.geometry, d, n);
  std::vector<std::vector<int>> members(grid.total());
  std::vector<int> cell_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    cell_of[i] = grid.index(grid.coord_of(config.particles[i].r));
    members[cell_of[i]].push_back(static_cast<int>(i));
  }
  const double d2 = d * d;
#pragma omp parallel
  {
    std::vector<int> cells;
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
      grid.neighbors(cell_of[i], cells);
      int count = 0;
      for (int c : cells)
        for (int j : members[c])
          if (static_cast<std::size_t>(j) != i &&
              norm2(config.geometry.displacement(config.particles[i].r, config.particles[j].r)) < d2)
            ++count;
      out[i] = count;
    }
  }
  return out;
}

std::vector<int> neighbor_counts_reference(const SystemConfig& config, double d) {
  const std::size_t n = config.size();
  std::vector<int> out(n, 0);
  const double d2 = d * d;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (norm2(config.geometry.displacement(config.particles[i].r, config.particles[j].r)) < d2) {
        ++out[i];
        ++out[j];
      }
  return out;
}

KlimontovichEstimate estimate_klimontovich(std::span<const SystemConfig> snapshots, const GridSpec& grid, double d,
                                           DepositPolicy policy) {
  KlimontovichEstimate est{PhaseHistogram(grid), PhaseHistogram(grid), PhaseHistogram(grid)};
  std::vector<MemberDeposits> members(snapshots.size());
  const auto count = static_cast<std::ptrdiff_t>(snapshots.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t m = 0; m < count; ++m) {
    const auto& snap = snapshots[static_cast<std::size_t>(m)];
    // neighbor_counts parallelises internally; nested regions run serially
    members[static_cast<std::size_t>(m)] = deposit_member(snap, grid, neighbor_counts(snap, d), policy);
  }
  for (const auto& m : members) accumulate(est, m);
  warn_overflow(est);
  return est;
}

KlimontovichEstimate estimate_klimontovich_reference(std::span<const SystemConfig> snapshots, const GridSpec& grid,
                                                     double d, DepositPolicy policy) {
  KlimontovichEstimate est{PhaseHistogram(grid), PhaseHistogram(grid), PhaseHistogram(grid)};
  for (const auto& snap : snapshots) accumulate(est, deposit_member(snap, grid, neighbor_counts_reference(snap, d), policy));
  return est;
}

PhaseHistogram estimate_fhat(std::span<const SystemConfig> snapshots, const GridSpec& grid) {
  PhaseHistogram h(grid);
  for (const auto& snap : snapshots) {
    const std::vector<int> none(snap.size(), 0);
    const auto m = deposit_member(snap, grid, none, DepositPolicy::mask_all);
    h.add_member(m.fhat, m.particles, m.overflow);
  }
  if (auto w = overflow_warning(h, "fhat")) std::clog << "warning: " << *w << '\n';
  return h;
}

PhaseHistogram estimate_I2(std::span<const SystemConfig> snapshots, const GridSpec& grid, double d) {
  return estimate_klimontovich(snapshots, grid, d).i2;
}

PhaseHistogram estimate_f1_masked(std::span<const SystemConfig> snapshots, const GridSpec& grid, double d,
                                  DepositPolicy policy) {
  return estimate_klimontovich(snapshots, grid, d, policy).f1;
}

}  // namespace bglab
