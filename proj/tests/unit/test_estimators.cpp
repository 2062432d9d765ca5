#include "doctest.h"
#include "fixtures.hpp"

#include <cmath>
#include <numbers>

#include "bglab/estimators.hpp"

using namespace bglab;

namespace {
GridSpec coarse_grid(BoundaryKind kind = BoundaryKind::periodic_box) {
  GridSpec g;
  g.spatial_bins = {2, 2, 2};
  g.velocity_bins = 4;
  g.v_max = 5.0;
  g.geometry = testing::unit_box(kind);
  return g;
}
}  // namespace

TEST_CASE("neighbor counts: hand example and brute-force agreement") {
  const auto cfg = testing::make_config(
      {{{0.02, 0.5, 0.5}, {}}, {{0.98, 0.5, 0.5}, {}}, {{0.5, 0.5, 0.5}, {}}, {{0.55, 0.5, 0.5}, {}}, {{0.57, 0.5, 0.5}, {}}},
      0.1, testing::unit_box(), Mode::free_flow);
  // 0 and 1 meet across the periodic face; 2, 3, 4 are mutually within d
  const std::vector<int> expect{1, 1, 2, 2, 2};
  CHECK(neighbor_counts(cfg, 0.1) == expect);
  CHECK(neighbor_counts_reference(cfg, 0.1) == expect);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto gas = testing::ideal_gas(800, 0.06, seed);
    CHECK(neighbor_counts(gas, 0.06) == neighbor_counts_reference(gas, 0.06));
  }
}

TEST_CASE("one-pass estimate satisfies f1 = fhat - I2 in raw weights") {
  std::vector<SystemConfig> ens;
  for (std::uint64_t s = 0; s < 6; ++s) ens.push_back(testing::ideal_gas(400, 0.08, s));
  const auto est = estimate_klimontovich(ens, coarse_grid(), 0.08);
  for (std::size_t c = 0; c < est.f1.weight.size(); ++c) CHECK(est.f1.weight[c] == est.fhat.weight[c] - est.i2.weight[c]);
  CHECK(est.fhat.sample_count == est.i2.sample_count);
  CHECK(est.fhat.integral() + est.fhat.overflow_fraction() == doctest::Approx(1.0));
}

TEST_CASE("parallel estimate is bit-identical to the serial reference") {
  std::vector<SystemConfig> ens;
  for (std::uint64_t s = 10; s < 18; ++s) ens.push_back(testing::ideal_gas(500, 0.07, s));
  for (auto policy : {DepositPolicy::mask_all, DepositPolicy::external_only}) {
    const auto par = estimate_klimontovich(ens, coarse_grid(), 0.07, policy);
    const auto ref = estimate_klimontovich_reference(ens, coarse_grid(), 0.07, policy);
    CHECK(par.fhat == ref.fhat);
    CHECK(par.i2 == ref.i2);
    CHECK(par.f1 == ref.f1);
  }
}

TEST_CASE("hard-sphere configurations have no overlap correction") {
  std::vector<SystemConfig> ens;
  for (std::uint64_t s = 0; s < 4; ++s) ens.push_back(testing::equilibrium_gas(300, 0.06, s));
  const auto i2 = estimate_I2(ens, coarse_grid(), 0.06);
  for (auto w : i2.weight) CHECK(w == 0);
  CHECK(estimate_f1_masked(ens, coarse_grid(), 0.06) == estimate_fhat(ens, coarse_grid()));
}

TEST_CASE("external-only policy drops overlapped particles") {
  const auto cfg = testing::make_config({{{0.2, 0.2, 0.2}, {}}, {{0.25, 0.2, 0.2}, {}}, {{0.7, 0.7, 0.7}, {}}}, 0.1,
                                        testing::unit_box(), Mode::free_flow);
  const std::vector<SystemConfig> ens{cfg};
  const auto all = estimate_klimontovich(ens, coarse_grid(), 0.1, DepositPolicy::mask_all);
  const auto ext = estimate_klimontovich(ens, coarse_grid(), 0.1, DepositPolicy::external_only);
  CHECK(all.fhat.sample_count == 3);
  CHECK(ext.fhat.sample_count == 1);
  std::int64_t total = 0;
  for (auto w : all.f1.weight) total += w;
  CHECK(total == 1);  // 3 deposits minus 2 overlap counts
}

TEST_CASE("uniform ideal gas: I2 / fhat near (N-1)(4 pi / 3) d^3 / V") {
  std::vector<SystemConfig> ens;
  for (std::uint64_t s = 0; s < 10; ++s) ens.push_back(testing::ideal_gas(1000, 0.05, 100 + s));
  const auto est = estimate_klimontovich(ens, coarse_grid(), 0.05);
  const double expected = 999.0 * 4.0 * std::numbers::pi / 3.0 * 0.05 * 0.05 * 0.05;
  CHECK(est.i2.integral() / est.fhat.integral() == doctest::Approx(expected).epsilon(0.1));
}
