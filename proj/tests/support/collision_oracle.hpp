#pragma once

#include <vector>

#include "bglab/histogram.hpp"
#include "bglab/vec3.hpp"

namespace bglab::testing {

struct PointMass {
  Vec3 v;
  double weight;
};

/// Fraction of the surface of the sphere (center, radius) that lies inside
/// the axis-aligned box [lo, hi]. Uses the fact that a sphere's area is
/// uniform in the height coordinate and integrates the in-rectangle arc
/// fraction of each horizontal circle with tanh-sinh quadrature.
double sphere_area_fraction_in_box(const Vec3& center, double radius, const Vec3& lo, const Vec3& hi);

/// Arc fraction of the circle (cx, cy, rho) inside [xlo, xhi] x [ylo, yhi].
double circle_fraction_in_rect(double cx, double cy, double rho, double xlo, double xhi, double ylo, double yhi);

/// Cell averages of scale * C[f, f] for a distribution made of point masses
/// (f = sum_a weight_a delta(v - v_a)), by deterministic quadrature:
/// loss at v_a is weight_a sum_b weight_b pi |v_a - v_b|, and each ordered
/// pair scatters the same rate isotropically over the sphere with center
/// (v_a + v_b)/2 and radius |v_a - v_b|/2.
std::vector<double> point_mass_collision_oracle(const std::vector<PointMass>& points, const GridSpec& grid,
                                                double scale);

}  // namespace bglab::testing
