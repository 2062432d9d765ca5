#include "collision_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace bglab::testing {

double circle_fraction_in_rect(double cx, double cy, double rho, double xlo, double xhi, double ylo, double yhi) {
  if (!(rho > 0.0)) return (cx >= xlo && cx < xhi && cy >= ylo && cy < yhi) ? 1.0 : 0.0;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> cuts{0.0, two_pi};
  auto add_cos = [&](double c) {
    if (std::abs(c) > 1.0) return;
    const double a = std::acos(c);
    cuts.push_back(a);
    cuts.push_back(two_pi - a);
  };
  auto add_sin = [&](double s) {
    if (std::abs(s) > 1.0) return;
    const double a = std::asin(s);
    cuts.push_back(a < 0.0 ? a + two_pi : a);
    cuts.push_back(std::numbers::pi - a);
  };
  add_cos((xlo - cx) / rho);
  add_cos((xhi - cx) / rho);
  add_sin((ylo - cy) / rho);
  add_sin((yhi - cy) / rho);
  std::sort(cuts.begin(), cuts.end());
  double inside = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    if (len <= 0.0) continue;
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const double x = cx + rho * std::cos(mid);
    const double y = cy + rho * std::sin(mid);
    if (x >= xlo && x <= xhi && y >= ylo && y <= yhi) inside += len;
  }
  return inside / two_pi;
}

double sphere_area_fraction_in_box(const Vec3& center, double radius, const Vec3& lo, const Vec3& hi) {
  const double z0 = std::max(lo.z, center.z - radius);
  const double z1 = std::min(hi.z, center.z + radius);
  if (!(z1 > z0)) return 0.0;
  // The integrand has square-root kinks where the horizontal circle touches
  // a rectangle edge or corner; split there so each piece is smooth inside.
  std::vector<double> zs{z0, z1};
  const double dxs[] = {lo.x - center.x, hi.x - center.x};
  const double dys[] = {lo.y - center.y, hi.y - center.y};
  std::vector<double> dists;
  for (double dx : dxs) dists.push_back(std::abs(dx));
  for (double dy : dys) dists.push_back(std::abs(dy));
  for (double dx : dxs)
    for (double dy : dys) dists.push_back(std::hypot(dx, dy));
  for (double dist : dists) {
    if (dist >= radius) continue;
    const double h = std::sqrt(radius * radius - dist * dist);
    for (double z : {center.z - h, center.z + h})
      if (z > z0 && z < z1) zs.push_back(z);
  }
  std::sort(zs.begin(), zs.end());
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto arc = [&](double z) {
    const double rho2 = radius * radius - (z - center.z) * (z - center.z);
    return circle_fraction_in_rect(center.x, center.y, std::sqrt(std::max(0.0, rho2)), lo.x, hi.x, lo.y, hi.y);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < zs.size(); ++i) {
    if (!(zs[i + 1] > zs[i])) continue;
    total += integrator.integrate(arc, zs[i], zs[i + 1]);
  }
  return total / (2.0 * radius);
}

std::vector<double> point_mass_collision_oracle(const std::vector<PointMass>& points, const GridSpec& grid,
                                                double scale) {
  const std::size_t nv = grid.velocity_cells();
  std::vector<double> out(nv, 0.0);
  const double w = grid.velocity_width();
  const double inv_vol = 1.0 / grid.velocity_cell_volume();
  for (const auto& a : points)
    for (const auto& b : points) {
      const double g = norm(a.v - b.v);
      if (g == 0.0) continue;
      const double rate = scale * std::numbers::pi * g * a.weight * b.weight;
      if (auto c = grid.velocity_index(a.v)) out[*c] -= rate * inv_vol;
      const Vec3 center = (a.v + b.v) * 0.5;
      const double radius = 0.5 * g;
      for (std::size_t c = 0; c < nv; ++c) {
        const auto k = grid.velocity_coords(c);
        const Vec3 lo{-grid.v_max + k[0] * w, -grid.v_max + k[1] * w, -grid.v_max + k[2] * w};
        const Vec3 hi = lo + Vec3{w, w, w};
        // cheap rejection: the sphere must reach the cell's bounding ball
        const Vec3 mid = lo + Vec3{0.5 * w, 0.5 * w, 0.5 * w};
        const double reach = norm(mid - center);
        const double half_diag = 0.5 * std::sqrt(3.0) * w;
        if (reach > radius + half_diag || reach < radius - half_diag) continue;
        out[c] += rate * sphere_area_fraction_in_box(center, radius, lo, hi) * inv_vol;
      }
    }
  return out;
}

}  // namespace bglab::testing
