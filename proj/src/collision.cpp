#include "bglab/collision.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bglab/dynamics.hpp"
#include "bglab/errors.hpp"

namespace bglab {

VelocitySource VelocitySource::maxwellian(double variance, Vec3 mean, double mass) {
  if (!(variance > 0.0)) throw ContractViolation("VelocitySource: variance must be > 0");
  VelocitySource s;
  s.kind_ = Kind::maxwellian;
  s.sigma_ = std::sqrt(variance);
  s.mean_ = mean;
  s.mass_ = mass;
  return s;
}

VelocitySource VelocitySource::points(std::vector<Vec3> velocities, std::vector<double> weights) {
  if (velocities.size() != weights.size() || velocities.empty())
    throw ContractViolation("VelocitySource: need one weight per velocity");
  VelocitySource s;
  s.kind_ = Kind::points;
  s.anchors_ = std::move(velocities);
  s.cdf_.resize(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0)) throw ContractViolation("VelocitySource: weights must be non-negative");
    acc += weights[i];
    s.cdf_[i] = acc;
  }
  if (!(acc > 0.0)) throw ContractViolation("VelocitySource: total weight must be positive");
  s.mass_ = acc;
  return s;
}

namespace {

void cells_source(const GridSpec& grid, const std::vector<double>& cell_mass, std::vector<Vec3>& anchors_out,
                  std::vector<double>& cdf_out) {
  const double half = grid.v_max;
  const double w = grid.velocity_width();
  double acc = 0.0;
  for (std::size_t c = 0; c < cell_mass.size(); ++c) {
    if (!(cell_mass[c] > 0.0)) continue;
    acc += cell_mass[c];
    const auto k = grid.velocity_coords(c);
    anchors_out.push_back({-half + k[0] * w, -half + k[1] * w, -half + k[2] * w});
    cdf_out.push_back(acc);
  }
}

}  // namespace

VelocitySource VelocitySource::velocity_marginal(const PhaseHistogram& f) {
  const GridSpec& g = f.grid;
  const std::size_t nv = g.velocity_cells();
  std::vector<double> mass(nv, 0.0);
  for (std::size_t s = 0; s < g.spatial_cells(); ++s)
    for (std::size_t w = 0; w < nv; ++w) mass[w] += static_cast<double>(f.weight[s * nv + w]);
  VelocitySource src;
  src.kind_ = Kind::cells;
  src.cell_width_ = g.velocity_width();
  cells_source(g, mass, src.anchors_, src.cdf_);
  if (src.cdf_.empty() || f.sample_count == 0) throw ContractViolation("VelocitySource: empty histogram");
  src.mass_ = src.cdf_.back() / static_cast<double>(f.sample_count);
  return src;
}

VelocitySource VelocitySource::spatial_cell(const PhaseHistogram& f, std::size_t s) {
  const GridSpec& g = f.grid;
  const std::size_t nv = g.velocity_cells();
  std::vector<double> mass(nv, 0.0);
  for (std::size_t w = 0; w < nv; ++w) mass[w] = static_cast<double>(f.weight[s * nv + w]);
  VelocitySource src;
  src.kind_ = Kind::cells;
  src.cell_width_ = g.velocity_width();
  cells_source(g, mass, src.anchors_, src.cdf_);
  if (src.cdf_.empty() || f.sample_count == 0) {
    src.mass_ = 0.0;
    return src;
  }
  src.mass_ = src.cdf_.back() / (static_cast<double>(f.sample_count) * g.spatial_cell_volume());
  return src;
}

Vec3 VelocitySource::draw(CounterRng& rng) const {
  switch (kind_) {
    case Kind::maxwellian: {
      std::normal_distribution<double> gauss;
      return {mean_.x + sigma_ * gauss(rng), mean_.y + sigma_ * gauss(rng), mean_.z + sigma_ * gauss(rng)};
    }
    case Kind::points:
    case Kind::cells: {
      const double u = rng.uniform() * cdf_.back();
      auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
      if (it == cdf_.end()) --it;
      const Vec3& a = anchors_[static_cast<std::size_t>(it - cdf_.begin())];
      if (kind_ == Kind::points) return a;
      const double x = rng.uniform();
      const double y = rng.uniform();
      const double z = rng.uniform();
      return {a.x + x * cell_width_, a.y + y * cell_width_, a.z + z * cell_width_};
    }
  }
  return {};
}

namespace {

struct BlockResult {
  std::vector<double> sum;
  std::vector<double> sumsq;
  std::vector<std::uint64_t> hits;
  std::array<double, 5> msum{};
  std::array<double, 5> msumsq{};
  double mabs = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t overflow = 0;
};

Vec3 unit_vector(CounterRng& rng) {
  std::normal_distribution<double> gauss;
  while (true) {
    const Vec3 n{gauss(rng), gauss(rng), gauss(rng)};
    const double len = norm(n);
    if (len > 1e-12) return n * (1.0 / len);
  }
}

BlockResult run_block(const VelocitySource& src, const GridSpec& grid, double weight_scale, std::uint64_t seed,
                      std::uint64_t block, std::uint64_t count) {
  BlockResult r;
  const std::size_t nv = grid.velocity_cells();
  r.sum.assign(nv, 0.0);
  r.sumsq.assign(nv, 0.0);
  r.hits.assign(nv, 0);
  const double inv_vol = 1.0 / grid.velocity_cell_volume();
  CounterRng rng = CounterRng(seed).split(block);

  std::array<std::size_t, 4> cells{};
  std::array<double, 4> xs{};
  for (std::uint64_t s = 0; s < count; ++s) {
    ++r.samples;
    const Vec3 v1 = src.draw(rng);
    const Vec3 v2 = src.draw(rng);
    const Vec3 n = unit_vector(rng);
    const double vn = dot(v1 - v2, n);
    if (vn >= 0.0) continue;  // n points along approach only when v12 . n < 0
    // uniform n on the sphere has density 1/(4 pi); split between both partners
    const double w = weight_scale * 4.0 * std::numbers::pi * (-vn) * 0.5;
    const auto post = resolve_pair_collision(v1, v2, n);
    const std::array<Vec3, 4> vel{post.v1, post.v2, v1, v2};
    const std::array<double, 4> sign{1.0, 1.0, -1.0, -1.0};

    int used = 0;
    std::array<double, 5> m{};
    for (int k = 0; k < 4; ++k) {
      const auto c = grid.velocity_index(vel[k]);
      if (!c) {
        ++r.overflow;
        continue;
      }
      const double x = sign[k] * w;
      m[0] += x;
      m[1] += x * vel[k].x;
      m[2] += x * vel[k].y;
      m[3] += x * vel[k].z;
      m[4] += x * norm2(vel[k]);
      r.mabs += w * (1.0 + norm(vel[k]) + norm2(vel[k]));
      int j = 0;
      while (j < used && cells[j] != *c) ++j;
      if (j == used) {
        cells[used] = *c;
        xs[used] = 0.0;
        ++used;
      }
      xs[j] += x * inv_vol;
      ++r.hits[*c];
    }
    for (int j = 0; j < used; ++j) {
      r.sum[cells[j]] += xs[j];
      r.sumsq[cells[j]] += xs[j] * xs[j];
    }
    for (int q = 0; q < 5; ++q) {
      r.msum[q] += m[q];
      r.msumsq[q] += m[q] * m[q];
    }
  }
  return r;
}

void reduce_into(BlockResult& acc, const BlockResult& b) {
  for (std::size_t c = 0; c < acc.sum.size(); ++c) {
    acc.sum[c] += b.sum[c];
    acc.sumsq[c] += b.sumsq[c];
    acc.hits[c] += b.hits[c];
  }
  for (int q = 0; q < 5; ++q) {
    acc.msum[q] += b.msum[q];
    acc.msumsq[q] += b.msumsq[q];
  }
  acc.mabs += b.mabs;
  acc.samples += b.samples;
  acc.overflow += b.overflow;
}

double mean_error(double sum, double sumsq, double n) {
  if (n < 2.0) return 0.0;
  const double mean = sum / n;
  return std::sqrt(std::max(0.0, sumsq / n - mean * mean) / (n - 1.0));
}

CollisionField finish(const GridSpec& grid, double scale, const CollisionOptions& options, const BlockResult& acc) {
  CollisionField f;
  f.grid = grid;
  f.samples = acc.samples;
  f.scale = scale;
  f.overflow = acc.overflow;
  const std::size_t nv = grid.velocity_cells();
  f.value.resize(nv);
  f.error.resize(nv);
  f.hits = acc.hits;
  const double n = static_cast<double>(acc.samples);
  std::size_t peak = 0;
  for (std::size_t c = 0; c < nv; ++c) {
    f.value[c] = n > 0.0 ? acc.sum[c] / n : 0.0;
    f.error[c] = mean_error(acc.sum[c], acc.sumsq[c], n);
    if (std::abs(f.value[c]) > std::abs(f.value[peak])) peak = c;
  }
  for (int q = 0; q < 5; ++q) {
    f.moments[q].value = n > 0.0 ? acc.msum[q] / n : 0.0;
    f.moments[q].error = mean_error(acc.msum[q], acc.msumsq[q], n);
    f.moments[q].roundoff = n > 0.0 ? 1e-12 * acc.mabs / n : 0.0;
  }
  f.budget_insufficient = f.value[peak] == 0.0 || f.error[peak] > options.target_rel_error * std::abs(f.value[peak]);
  return f;
}

void check_options(const CollisionOptions& options) {
  if (options.samples == 0 || options.block_size == 0) throw ContractViolation("collision_integral_mc: empty sample budget");
}

}  // namespace

CollisionField collision_integral_mc(const VelocitySource& source, const GridSpec& grid, double scale,
                                     const CollisionOptions& options) {
  check_options(options);
  const double weight_scale = scale * source.mass() * source.mass();
  const std::uint64_t blocks = (options.samples + options.block_size - 1) / options.block_size;
  BlockResult acc;
  acc.sum.assign(grid.velocity_cells(), 0.0);
  acc.sumsq.assign(grid.velocity_cells(), 0.0);
  acc.hits.assign(grid.velocity_cells(), 0);
  constexpr std::uint64_t kBatch = 64;
  std::vector<BlockResult> batch;
  for (std::uint64_t first = 0; first < blocks; first += kBatch) {
    const std::uint64_t count = std::min(kBatch, blocks - first);
    batch.assign(count, {});
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
      const std::uint64_t b = first + static_cast<std::uint64_t>(i);
      const std::uint64_t n = std::min(options.block_size, options.samples - b * options.block_size);
      batch[static_cast<std::size_t>(i)] = run_block(source, grid, weight_scale, options.seed, b, n);
    }
    for (const auto& r : batch) reduce_into(acc, r);
  }
  return finish(grid, scale, options, acc);
}

CollisionField collision_integral_mc_reference(const VelocitySource& source, const GridSpec& grid, double scale,
                                               const CollisionOptions& options) {
  check_options(options);
  const double weight_scale = scale * source.mass() * source.mass();
  const std::uint64_t blocks = (options.samples + options.block_size - 1) / options.block_size;
  BlockResult acc;
  acc.sum.assign(grid.velocity_cells(), 0.0);
  acc.sumsq.assign(grid.velocity_cells(), 0.0);
  acc.hits.assign(grid.velocity_cells(), 0);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    const std::uint64_t n = std::min(options.block_size, options.samples - b * options.block_size);
    reduce_into(acc, run_block(source, grid, weight_scale, options.seed, b, n));
  }
  return finish(grid, scale, options, acc);
}

CollisionField collision_integral_mc(const PhaseHistogram& f, double d, double n_particles,
                                     const CollisionOptions& options) {
  const auto src = VelocitySource::velocity_marginal(f);
  return collision_integral_mc(src, f.grid, collision_scale(d, n_particles, f.grid.geometry.volume()), options);
}

CollisionField collision_integral_mc_resolved(const PhaseHistogram& f, double d, double n_particles,
                                              const CollisionOptions& options) {
  const GridSpec& g = f.grid;
  const std::size_t ns = g.spatial_cells();
  const std::size_t nv = g.velocity_cells();
  CollisionField out;
  out.grid = g;
  out.spatially_resolved = true;
  out.spatial_cells = ns;
  out.value.assign(ns * nv, 0.0);
  out.error.assign(ns * nv, 0.0);
  out.hits.assign(ns * nv, 0);
  out.scale = d * d * n_particles;
  for (std::size_t s = 0; s < ns; ++s) {
    const auto src = VelocitySource::spatial_cell(f, s);
    if (!(src.mass() > 0.0)) continue;
    CollisionOptions o = options;
    o.seed = derive_seed(options.seed, {s});
    const auto local = collision_integral_mc(src, g, out.scale, o);
    std::copy(local.value.begin(), local.value.end(), out.value.begin() + static_cast<std::ptrdiff_t>(s * nv));
    std::copy(local.error.begin(), local.error.end(), out.error.begin() + static_cast<std::ptrdiff_t>(s * nv));
    std::copy(local.hits.begin(), local.hits.end(), out.hits.begin() + static_cast<std::ptrdiff_t>(s * nv));
    out.samples += local.samples;
    out.overflow += local.overflow;
    for (int q = 0; q < 5; ++q) {
      out.moments[q].value += local.moments[q].value;
      out.moments[q].error = std::hypot(out.moments[q].error, local.moments[q].error);
      out.moments[q].roundoff += local.moments[q].roundoff;
    }
    out.budget_insufficient = out.budget_insufficient || local.budget_insufficient;
  }
  return out;
}

}  // namespace bglab
