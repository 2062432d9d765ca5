#include "bglab/residual.hpp"

#include <cmath>
#include <limits>

#include "bglab/errors.hpp"

namespace bglab {

DensityField DensityField::from_histogram(const PhaseHistogram& h) {
  DensityField f;
  f.grid = h.grid;
  const std::size_t n = h.grid.total();
  f.value.resize(n);
  f.error.resize(n);
  f.hits = h.hits;
  for (std::size_t c = 0; c < n; ++c) {
    f.value[c] = h.density(c);
    f.error[c] = h.standard_error(c);
  }
  return f;
}

DensityField DensityField::from_function(const GridSpec& grid,
                                         const std::function<double(const Vec3&, const Vec3&)>& fn) {
  DensityField f;
  f.grid = grid;
  const std::size_t nv = grid.velocity_cells();
  f.value.resize(grid.total());
  f.error.assign(grid.total(), 0.0);
  f.hits.assign(grid.total(), std::numeric_limits<std::int64_t>::max() / 4);
  for (std::size_t s = 0; s < grid.spatial_cells(); ++s) {
    const Vec3 r = grid.spatial_center(s);
    for (std::size_t w = 0; w < nv; ++w) f.value[s * nv + w] = fn(r, grid.velocity_center(w));
  }
  return f;
}

namespace {

// d/dx along one spatial axis at cell (s, w) and its variance.
struct Derivative {
  double value;
  double variance;
};

Derivative spatial_derivative(const DensityField& f, std::size_t s, std::size_t w, int axis) {
  const GridSpec& g = f.grid;
  const int n = g.spatial_bins[axis];
  if (n == 1) return {0.0, 0.0};
  const double h = g.spatial_width(axis);
  const std::size_t nv = g.velocity_cells();
  auto c = g.spatial_coords(s);
  auto at = [&](int i) {
    auto cc = c;
    cc[axis] = i;
    return g.spatial_from_coords(cc) * nv + w;
  };
  const int i = c[axis];
  const auto& v = f.value;
  const auto& e = f.error;
  if (g.geometry.periodic()) {
    const std::size_t up = at((i + 1) % n);
    const std::size_t dn = at((i - 1 + n) % n);
    return {(v[up] - v[dn]) / (2.0 * h), (e[up] * e[up] + e[dn] * e[dn]) / (4.0 * h * h)};
  }
  if (i > 0 && i < n - 1) {
    const std::size_t up = at(i + 1);
    const std::size_t dn = at(i - 1);
    return {(v[up] - v[dn]) / (2.0 * h), (e[up] * e[up] + e[dn] * e[dn]) / (4.0 * h * h)};
  }
  const double sign = i == 0 ? 1.0 : -1.0;
  const int step = i == 0 ? 1 : -1;
  const std::size_t c0 = at(i);
  const std::size_t c1 = at(i + step);
  if (n == 2) {
    const double d = (v[c1] - v[c0]) / h;
    return {sign * d, (e[c0] * e[c0] + e[c1] * e[c1]) / (h * h)};
  }
  const std::size_t c2 = at(i + 2 * step);
  const double d = (-3.0 * v[c0] + 4.0 * v[c1] - v[c2]) / (2.0 * h);
  const double var = (9.0 * e[c0] * e[c0] + 16.0 * e[c1] * e[c1] + e[c2] * e[c2]) / (4.0 * h * h);
  return {sign * d, var};
}

}  // namespace

ResidualField free_streaming_residual(std::span<const DensityField> series, double dt, double time) {
  if (series.size() < 3) throw ContractViolation("free_streaming_residual: need at least three fields");
  if (!(dt > 0.0)) throw ContractViolation("free_streaming_residual: dt must be > 0");
  for (const auto& f : series)
    if (!(f.grid == series[0].grid)) throw GridMismatch("free_streaming_residual: grids differ");

  const std::size_t mid = series.size() / 2;
  const DensityField& before = series[mid - 1];
  const DensityField& at = series[mid];
  const DensityField& after = series[mid + 1];
  const GridSpec& g = at.grid;

  ResidualField r;
  r.grid = g;
  r.time = time;
  r.dt = dt;
  for (int k = 0; k < 3; ++k) r.spacing[k] = g.spatial_width(k);
  r.value.resize(g.total());
  r.error.resize(g.total());
  r.hits = at.hits;

  const std::size_t nv = g.velocity_cells();
  const auto ns = static_cast<std::ptrdiff_t>(g.spatial_cells());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t si = 0; si < ns; ++si) {
    const auto s = static_cast<std::size_t>(si);
    for (std::size_t w = 0; w < nv; ++w) {
      const std::size_t c = s * nv + w;
      const Vec3 v = g.velocity_center(w);
      double value = (after.value[c] - before.value[c]) / (2.0 * dt);
      double var = (after.error[c] * after.error[c] + before.error[c] * before.error[c]) / (4.0 * dt * dt);
      for (int k = 0; k < 3; ++k) {
        const Derivative dk = spatial_derivative(at, s, w, k);
        value += v[k] * dk.value;
        var += v[k] * v[k] * dk.variance;
      }
      r.value[c] = value;
      r.error[c] = std::sqrt(var);
    }
  }
  return r;
}

ResidualField free_streaming_residual(std::span<const PhaseHistogram> series, double dt, double time) {
  std::vector<DensityField> fields;
  fields.reserve(series.size());
  for (const auto& h : series) fields.push_back(DensityField::from_histogram(h));
  return free_streaming_residual(std::span<const DensityField>(fields), dt, time);
}

}  // namespace bglab
