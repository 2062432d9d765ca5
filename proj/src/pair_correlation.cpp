#include "bglab/pair_correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bglab/errors.hpp"

namespace bglab {
namespace {

void check(const RadialSpec& radial, const AfcSpec& afc) {
  if (radial.bins < 1 || !(radial.r_max > 0.0)) throw ContractViolation("pair correlation: invalid radial spec");
  if (afc.velocity_bins < 1 || !(afc.v_max > 0.0)) throw ContractViolation("pair correlation: invalid AFC spec");
  for (int b : afc.spatial_bins)
    if (b < 1) throw ContractViolation("pair correlation: invalid AFC spec");
}

int coarse_bin(const ParticleState& p, const DomainGeometry& g, const AfcSpec& spec) {
  std::array<int, 3> s{};
  std::array<int, 3> w{};
  const double vw = 2.0 * spec.v_max / spec.velocity_bins;
  for (int k = 0; k < 3; ++k) {
    s[k] = std::clamp(static_cast<int>(std::floor(p.r[k] / (g.lengths[k] / spec.spatial_bins[k]))), 0,
                      spec.spatial_bins[k] - 1);
    if (!(p.v[k] >= -spec.v_max && p.v[k] < spec.v_max)) return -1;
    w[k] = std::clamp(static_cast<int>(std::floor((p.v[k] + spec.v_max) / vw)), 0, spec.velocity_bins - 1);
  }
  const int nv = spec.velocity_bins;
  const int sp = (s[2] * spec.spatial_bins[1] + s[1]) * spec.spatial_bins[0] + s[0];
  return sp * nv * nv * nv + (w[2] * nv + w[1]) * nv + w[0];
}

int coarse_total(const AfcSpec& spec) {
  const int nv = spec.velocity_bins;
  return spec.spatial_bins[0] * spec.spatial_bins[1] * spec.spatial_bins[2] * nv * nv * nv;
}

// One-particle and ordered-pair coarse counts of a single member. Pair counts
// follow from occupation numbers: n_a n_b - [a == b] n_a.
void afc_member(const SystemConfig& snap, const AfcSpec& spec, std::vector<std::int64_t>& one,
                std::vector<std::int64_t>& pairs, std::int64_t& particles, std::int64_t& ordered_pairs) {
  const int nb = coarse_total(spec);
  std::vector<std::int64_t> occ(static_cast<std::size_t>(nb), 0);
  std::int64_t n_in = 0;
  for (const auto& p : snap.particles) {
    const int b = coarse_bin(p, snap.geometry, spec);
    if (b < 0) continue;
    ++occ[static_cast<std::size_t>(b)];
    ++n_in;
  }
  for (int a = 0; a < nb; ++a) {
    one[static_cast<std::size_t>(a)] += occ[static_cast<std::size_t>(a)];
    for (int b = 0; b < nb; ++b) {
      const std::int64_t c = occ[static_cast<std::size_t>(a)] * occ[static_cast<std::size_t>(b)] -
                             (a == b ? occ[static_cast<std::size_t>(a)] : 0);
      pairs[static_cast<std::size_t>(a) * nb + b] += c;
    }
  }
  const auto n = static_cast<std::int64_t>(snap.size());
  particles += n;
  ordered_pairs += n * (n - 1);
}

AfcResult finish_afc(const AfcSpec& spec, std::vector<std::int64_t> one, std::vector<std::int64_t> pairs,
                     std::int64_t particles, std::int64_t ordered_pairs, std::int64_t members) {
  AfcResult r;
  const int nb = coarse_total(spec);
  for (int a = 0; a < nb; ++a) {
    for (int b = 0; b < nb; ++b) {
      const auto ab = static_cast<std::size_t>(a) * nb + b;
      const auto na = one[static_cast<std::size_t>(a)];
      const auto nbb = one[static_cast<std::size_t>(b)];
      if (pairs[ab] < spec.min_count || na == 0 || nbb == 0) {
        ++r.indeterminate_bins;
        continue;
      }
      ++r.determinate_bins;
      const double p2 = static_cast<double>(pairs[ab]) / static_cast<double>(ordered_pairs);
      const double p11 = static_cast<double>(na) * static_cast<double>(nbb) /
                         (static_cast<double>(particles) * static_cast<double>(particles));
      r.metric = std::max(r.metric, std::abs(p2 - p11) / std::max(p11, spec.floor));
      const double rel = std::sqrt((a == b ? 2.0 : 1.0) * static_cast<double>(members) /
                                   (static_cast<double>(na) * static_cast<double>(nbb)));
      r.noise_bound = std::max(r.noise_bound, 4.0 * rel);
    }
  }
  r.one_particle_counts = std::move(one);
  r.pair_counts = std::move(pairs);
  return r;
}

std::vector<std::int64_t> radial_counts(const SystemConfig& snap, const RadialSpec& radial, bool parallel) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(radial.bins), 0);
  const auto n = static_cast<std::ptrdiff_t>(snap.size());
  const double r2max = radial.r_max * radial.r_max;
  const double inv_w = radial.bins / radial.r_max;
  const auto& ps = snap.particles;
  const auto& geo = snap.geometry;
  std::int64_t* data = counts.data();
  const int nbins = radial.bins;
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : data[:nbins])
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      for (std::ptrdiff_t j = i + 1; j < n; ++j) {
        const double r2 = norm2(geo.displacement(ps[static_cast<std::size_t>(i)].r, ps[static_cast<std::size_t>(j)].r));
        if (r2 >= r2max) continue;
        const int b = std::min(static_cast<int>(std::sqrt(r2) * inv_w), nbins - 1);
        ++data[b];
      }
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      for (std::ptrdiff_t j = i + 1; j < n; ++j) {
        const double r2 = norm2(geo.displacement(ps[static_cast<std::size_t>(i)].r, ps[static_cast<std::size_t>(j)].r));
        if (r2 >= r2max) continue;
        const int b = std::min(static_cast<int>(std::sqrt(r2) * inv_w), nbins - 1);
        ++data[b];
      }
    }
  }
  return counts;
}

PairCorrelationResult estimate(std::span<const SystemConfig> snapshots, const RadialSpec& radial, const AfcSpec& afc,
                               bool parallel) {
  check(radial, afc);
  PairCorrelationResult out;
  out.g.spec = radial;
  out.g.counts.assign(static_cast<std::size_t>(radial.bins), 0);
  const auto nb = static_cast<std::size_t>(coarse_total(afc));
  std::vector<std::int64_t> one(nb, 0);
  std::vector<std::int64_t> pairs(nb * nb, 0);
  std::int64_t particles = 0;
  std::int64_t ordered = 0;
  for (const auto& snap : snapshots) {
    const auto c = radial_counts(snap, radial, parallel);
    for (std::size_t b = 0; b < c.size(); ++b) out.g.counts[b] += c[b];
    const double n = static_cast<double>(snap.size());
    out.g.pair_norm += 0.5 * n * (n - 1.0) / snap.geometry.volume();
    out.g.ensemble_count += 1;
    afc_member(snap, afc, one, pairs, particles, ordered);
  }
  out.afc = finish_afc(afc, std::move(one), std::move(pairs), particles, ordered,
                       static_cast<std::int64_t>(snapshots.size()));
  return out;
}

}  // namespace

double PairHistogram::ideal_expectation(int b) const {
  const double r0 = lower_edge(b);
  const double r1 = r0 + bin_width();
  return pair_norm * (4.0 * std::numbers::pi / 3.0) * (r1 * r1 * r1 - r0 * r0 * r0);
}

double PairHistogram::g(int b) const {
  const double e = ideal_expectation(b);
  return e > 0.0 ? static_cast<double>(counts[static_cast<std::size_t>(b)]) / e : 0.0;
}

double PairHistogram::g_error(int b) const {
  const double e = ideal_expectation(b);
  return e > 0.0 ? std::sqrt(static_cast<double>(std::max<std::int64_t>(counts[static_cast<std::size_t>(b)], 1))) / e
                 : 0.0;
}

PairCorrelationResult estimate_pair_correlation(std::span<const SystemConfig> snapshots, const RadialSpec& radial,
                                                const AfcSpec& afc) {
  return estimate(snapshots, radial, afc, true);
}

PairCorrelationResult estimate_pair_correlation_reference(std::span<const SystemConfig> snapshots,
                                                          const RadialSpec& radial, const AfcSpec& afc) {
  return estimate(snapshots, radial, afc, false);
}

}  // namespace bglab
