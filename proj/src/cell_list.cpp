#include "bglab/cell_list.hpp"

#include <algorithm>
#include <cmath>

namespace bglab {

CellGrid::CellGrid(const DomainGeometry& geometry, double min_edge, std::size_t particle_count)
    : geometry_(geometry) {
  const double per_particle = std::cbrt(geometry.volume() / static_cast<double>(std::max<std::size_t>(particle_count, 1)));
  const double target = std::max(min_edge, per_particle);
  for (int k = 0; k < 3; ++k) {
    const double len = geometry.lengths[k];
    int n = static_cast<int>(std::floor(len / target));
    n = std::max(n, 1);
    // floor() may round up for exact ratios; keep edge >= min_edge
    while (n > 1 && len / n < min_edge) --n;
    counts_[k] = n;
    edge_[k] = len / n;
  }
}

CellGrid::Coord CellGrid::coord_of(const Vec3& r) const {
  Coord c{};
  for (int k = 0; k < 3; ++k) {
    int i = static_cast<int>(std::floor(r[k] / edge_[k]));
    c[k] = std::clamp(i, 0, counts_[k] - 1);
  }
  return c;
}

CellGrid::Coord CellGrid::coord(int cell) const {
  Coord c{};
  c[0] = cell % counts_[0];
  c[1] = (cell / counts_[0]) % counts_[1];
  c[2] = cell / (counts_[0] * counts_[1]);
  return c;
}

void CellGrid::neighbors(int cell, std::vector<int>& out) const {
  out.clear();
  const Coord c = coord(cell);
  const bool periodic = geometry_.periodic();
  for (int dz = -1; dz <= 1; ++dz) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        Coord n{c[0] + dx, c[1] + dy, c[2] + dz};
        bool inside = true;
        for (int k = 0; k < 3; ++k) {
          if (n[k] < 0 || n[k] >= counts_[k]) {
            if (!periodic) {
              inside = false;
              break;
            }
            n[k] = (n[k] + counts_[k]) % counts_[k];
          }
        }
        if (inside) out.push_back(index(n));
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

}  // namespace bglab
