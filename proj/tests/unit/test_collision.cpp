#include "doctest.h"
#include "collision_oracle.hpp"
#include "fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "bglab/collision.hpp"
#include "bglab/estimators.hpp"

using namespace bglab;

namespace {
GridSpec velocity_grid(int bins, double v_max) {
  GridSpec g;
  g.spatial_bins = {1, 1, 1};
  g.velocity_bins = bins;
  g.v_max = v_max;
  g.geometry = testing::unit_box();
  return g;
}
}  // namespace

TEST_CASE("sphere area fractions in simple boxes") {
  const Vec3 c{0.0, 0.0, 0.0};
  CHECK(testing::sphere_area_fraction_in_box(c, 1.0, {-2, -2, -2}, {2, 2, 2}) == doctest::Approx(1.0));
  CHECK(testing::sphere_area_fraction_in_box(c, 1.0, {3, 3, 3}, {4, 4, 4}) == doctest::Approx(0.0));
  CHECK(testing::sphere_area_fraction_in_box(c, 1.0, {0, -2, -2}, {2, 2, 2}) == doctest::Approx(0.5));
  CHECK(testing::sphere_area_fraction_in_box(c, 1.0, {0, 0, 0}, {2, 2, 2}) == doctest::Approx(0.125));
  CHECK(testing::sphere_area_fraction_in_box(c, 1.0, {-2, -2, 0.5}, {2, 2, 2}) == doctest::Approx(0.25));
  CHECK(testing::circle_fraction_in_rect(0, 0, 1, 0, 2, -2, 2) == doctest::Approx(0.5));
}

TEST_CASE("Maxwellian is a null of the collision operator") {
  const auto grid = velocity_grid(8, 4.0);
  CollisionOptions opt;
  opt.samples = 4'000'000;
  opt.seed = 7;
  const auto field = collision_integral_mc(VelocitySource::maxwellian(1.0), grid, 1.0, opt);
  std::size_t beyond = 0, checked = 0;
  double sup = 0.0;
  for (std::size_t c = 0; c < field.value.size(); ++c) {
    if (!field.well_sampled(c)) continue;
    ++checked;
    sup = std::max(sup, std::abs(field.value[c]) / field.error[c]);
    if (std::abs(field.value[c]) > 3.0 * field.error[c]) ++beyond;
  }
  CHECK(checked > 100);
  CHECK(sup < 5.0);
  CHECK(static_cast<double>(beyond) < 0.02 * static_cast<double>(checked) + 2.0);
}

TEST_CASE("conserved moments of the collision term vanish") {
  const auto grid = velocity_grid(8, 5.0);
  CollisionOptions opt;
  opt.samples = 1'000'000;
  opt.seed = 11;
  const auto src = VelocitySource::points({{1.0, 0.0, 0.0}, {-1.0, 0.5, 0.0}, {0.0, -1.0, 1.0}}, {1.0, 2.0, 0.5});
  const auto field = collision_integral_mc(src, grid, 1.0, opt);
  for (const auto& m : field.moments) CHECK(m.consistent_with_zero());
}

TEST_CASE("Monte Carlo matches the point-mass quadrature oracle") {
  const auto grid = velocity_grid(6, 3.0);
  const std::vector<testing::PointMass> pts{{{1.2, 0.1, -0.2}, 0.6}, {{-1.1, 0.3, 0.4}, 0.4}};
  const auto oracle = testing::point_mass_collision_oracle(pts, grid, 1.0);
  CollisionOptions opt;
  opt.samples = 4'000'000;
  opt.seed = 3;
  const auto field = collision_integral_mc(VelocitySource::points({pts[0].v, pts[1].v}, {pts[0].weight, pts[1].weight}),
                                           grid, 1.0, opt);
  double peak = 0.0;
  for (double x : oracle) peak = std::max(peak, std::abs(x));
  REQUIRE(peak > 0.0);
  for (std::size_t c = 0; c < oracle.size(); ++c) {
    INFO("cell " << c);
    CHECK(std::abs(field.value[c] - oracle[c]) <= 5.0 * field.error[c] + 1e-9 * peak);
  }
}

TEST_CASE("parallel blocks reproduce the serial reference bit for bit") {
  const auto grid = velocity_grid(6, 4.0);
  CollisionOptions opt;
  opt.samples = 300'000;
  opt.seed = 99;
  opt.block_size = 10'000;
  const auto src = VelocitySource::maxwellian(1.3, {0.2, 0.0, -0.1});
  const auto a = collision_integral_mc(src, grid, 2.0, opt);
  const auto b = collision_integral_mc_reference(src, grid, 2.0, opt);
  CHECK(a.value == b.value);
  CHECK(a.error == b.error);
  CHECK(a.hits == b.hits);
  CHECK(a.samples == b.samples);
}

TEST_CASE("histogram marginal uses d^2 N / V and flags tiny budgets") {
  std::vector<SystemConfig> ens;
  for (std::uint64_t s = 0; s < 4; ++s) ens.push_back(testing::equilibrium_gas(200, 0.05, s));
  GridSpec grid = velocity_grid(4, 4.0);
  const auto fhat = estimate_fhat(ens, grid);
  CollisionOptions opt;
  opt.samples = 2000;
  opt.block_size = 1000;
  const auto field = collision_integral_mc(fhat, 0.05, 200.0, opt);
  CHECK(field.scale == doctest::Approx(collision_scale(0.05, 200.0, 1.0)));
  CHECK(field.budget_insufficient);
  CHECK_FALSE(field.spatially_resolved);
  CHECK(field.value.size() == grid.velocity_cells());
}

TEST_CASE("spatially resolved field has one block per spatial cell") {
  std::vector<SystemConfig> ens;
  for (std::uint64_t s = 0; s < 4; ++s) ens.push_back(testing::equilibrium_gas(200, 0.05, s));
  GridSpec grid = velocity_grid(4, 4.0);
  grid.spatial_bins = {2, 1, 1};
  const auto f = estimate_fhat(ens, grid);
  CollisionOptions opt;
  opt.samples = 20000;
  const auto field = collision_integral_mc_resolved(f, 0.05, 200.0, opt);
  CHECK(field.spatially_resolved);
  CHECK(field.spatial_cells == 2);
  CHECK(field.value.size() == grid.total());
}
