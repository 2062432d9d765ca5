#pragma once

#include <array>
#include <vector>

#include "bglab/system.hpp"

namespace bglab {

/// Regular grid of cells with edge >= `min_edge` covering the box. The
/// number of cells per axis is additionally capped so that there are
/// roughly as many cells as particles.
class CellGrid {
 public:
  CellGrid() = default;
  CellGrid(const DomainGeometry& geometry, double min_edge, std::size_t particle_count);

  using Coord = std::array<int, 3>;

  int total() const { return counts_[0] * counts_[1] * counts_[2]; }
  const Coord& counts() const { return counts_; }
  double edge(int axis) const { return edge_[axis]; }

  Coord coord_of(const Vec3& r) const;
  int index(const Coord& c) const { return (c[2] * counts_[1] + c[1]) * counts_[0] + c[0]; }
  Coord coord(int cell) const;

  /// Cells within one step on each axis (wrapping when periodic), sorted
  /// ascending without duplicates. Includes `cell` itself.
  void neighbors(int cell, std::vector<int>& out) const;

 private:
  DomainGeometry geometry_;
  Coord counts_{1, 1, 1};
  std::array<double, 3> edge_{1.0, 1.0, 1.0};
};

}  // namespace bglab
