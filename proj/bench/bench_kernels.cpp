// Parallel kernels against their serial references on the same inputs.
#include <benchmark/benchmark.h>

#include "fixtures.hpp"

#include "bglab/collision.hpp"
#include "bglab/estimators.hpp"
#include "bglab/pair_correlation.hpp"

using namespace bglab;

namespace {

const std::vector<SystemConfig>& ensemble() {
  static const std::vector<SystemConfig> e = [] {
    std::vector<SystemConfig> out;
    for (std::uint64_t s = 0; s < 32; ++s) out.push_back(testing::ideal_gas(2000, 0.03, s));
    return out;
  }();
  return e;
}

GridSpec grid() {
  GridSpec g;
  g.spatial_bins = {4, 4, 4};
  g.velocity_bins = 8;
  g.v_max = 5.0;
  g.geometry = testing::unit_box();
  return g;
}

void BM_Klimontovich(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(estimate_klimontovich(ensemble(), grid(), 0.03));
}
void BM_KlimontovichReference(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(estimate_klimontovich_reference(ensemble(), grid(), 0.03));
}

void BM_PairCorrelation(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(estimate_pair_correlation(ensemble(), {50, 0.25}));
}
void BM_PairCorrelationReference(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(estimate_pair_correlation_reference(ensemble(), {50, 0.25}));
}

CollisionOptions collision_options() {
  CollisionOptions o;
  o.samples = 2'000'000;
  o.seed = 1;
  return o;
}
void BM_Collision(benchmark::State& st) {
  const auto src = VelocitySource::maxwellian(1.0);
  for (auto _ : st) benchmark::DoNotOptimize(collision_integral_mc(src, grid(), 1.0, collision_options()));
}
void BM_CollisionReference(benchmark::State& st) {
  const auto src = VelocitySource::maxwellian(1.0);
  for (auto _ : st) benchmark::DoNotOptimize(collision_integral_mc_reference(src, grid(), 1.0, collision_options()));
}

}  // namespace

BENCHMARK(BM_Klimontovich)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_KlimontovichReference)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PairCorrelation)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PairCorrelationReference)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Collision)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CollisionReference)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
