#include "doctest.h"
#include "fixtures.hpp"

#include "bglab/errors.hpp"
#include "bglab/histogram.hpp"

using namespace bglab;

namespace {
GridSpec small_grid() {
  GridSpec g;
  g.spatial_bins = {2, 2, 2};
  g.velocity_bins = 4;
  g.v_max = 2.0;
  g.geometry = testing::unit_box();
  return g;
}
}  // namespace

TEST_CASE("cell indexing is x-fastest with velocity innermost") {
  const auto g = small_grid();
  CHECK(g.total() == 8 * 64);
  CHECK(g.spatial_index({0.75, 0.25, 0.25}) == 1);
  CHECK(g.spatial_index({0.25, 0.75, 0.25}) == 2);
  CHECK(g.spatial_index({0.25, 0.25, 0.75}) == 4);
  CHECK(g.spatial_index({1.0, 1.0, 1.0}) == 7);  // upper edge clamps
  CHECK(g.velocity_index({-2.0, -2.0, -2.0}) == std::size_t{0});
  CHECK(g.velocity_index({-1.0, -2.0, -2.0}) == std::size_t{1});
  CHECK_FALSE(g.velocity_index({2.0, 0.0, 0.0}).has_value());
  CHECK_FALSE(g.velocity_index({0.0, -2.5, 0.0}).has_value());
  CHECK(g.cell_index({0.75, 0.25, 0.25}, {-1.0, -2.0, -2.0}) == std::size_t{64 + 1});
  const Vec3 c = g.velocity_center(1);
  CHECK(c.x == doctest::Approx(-0.5));
  CHECK(c.y == doctest::Approx(-1.5));
}

TEST_CASE("density divides by deposits and cell volume") {
  const auto g = small_grid();
  PhaseHistogram h(g);
  const std::vector<PhaseHistogram::Deposit> deps{{3, 1}, {3, 1}, {5, 1}};
  h.add_member(deps, 4, 1);
  // cell volume = 0.125 * 1 ; four deposits attempted
  CHECK(h.density(3) == doctest::Approx(2.0 / (4 * 0.125)));
  CHECK(h.hits[3] == 2);
  CHECK(h.overflow == 1);
  CHECK(h.integral() == doctest::Approx(0.75));
  CHECK(h.overflow_fraction() == doctest::Approx(0.25));
  CHECK(overflow_warning(h, "test").has_value());
}

TEST_CASE("member spread drives the standard error") {
  const auto g = small_grid();
  PhaseHistogram h(g);
  const std::vector<PhaseHistogram::Deposit> a{{0, 1}, {0, 1}};
  const std::vector<PhaseHistogram::Deposit> b{{0, 1}, {0, 1}, {0, 1}, {0, 1}};
  h.add_member(a, 10, 0);
  h.add_member(b, 10, 0);
  // member weights 2 and 4: sample variance 2, variance of the sum 4
  const double norm = 20 * g.cell_volume();
  CHECK(h.standard_error(0) == doctest::Approx(2.0 / norm));
  CHECK(h.density(0) == doctest::Approx(6.0 / norm));
}

TEST_CASE("merging is exact and order independent") {
  const auto g = small_grid();
  PhaseHistogram a(g), b(g), c(g);
  a.add_member(std::vector<PhaseHistogram::Deposit>{{1, 1}, {2, -1}}, 2, 0);
  b.add_member(std::vector<PhaseHistogram::Deposit>{{1, 3}, {9, 1}}, 2, 1);
  c.add_member(std::vector<PhaseHistogram::Deposit>{{2, 2}}, 1, 0);
  const auto ab_c = merge_estimates(merge_estimates(a, b), c);
  const auto c_ba = merge_estimates(c, merge_estimates(b, a));
  CHECK(ab_c == c_ba);
  CHECK(ab_c.weight[1] == 4);
  CHECK(ab_c.weight[2] == 1);
  CHECK(ab_c.sample_count == 5);
  CHECK(ab_c.ensemble_count == 3);

  PhaseHistogram direct(g);
  direct.add_member(std::vector<PhaseHistogram::Deposit>{{1, 1}, {2, -1}}, 2, 0);
  direct.add_member(std::vector<PhaseHistogram::Deposit>{{1, 3}, {9, 1}}, 2, 1);
  direct.add_member(std::vector<PhaseHistogram::Deposit>{{2, 2}}, 1, 0);
  CHECK(direct == ab_c);

  auto other = g;
  other.velocity_bins = 8;
  CHECK_THROWS_AS(merge_estimates(a, PhaseHistogram(other)), GridMismatch);
}
