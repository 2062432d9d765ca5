#include "bglab/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bglab/errors.hpp"

namespace bglab {

std::size_t GridSpec::spatial_index(const Vec3& r) const {
  std::array<int, 3> c{};
  for (int k = 0; k < 3; ++k) {
    const int i = static_cast<int>(std::floor(r[k] / spatial_width(k)));
    c[k] = std::clamp(i, 0, spatial_bins[k] - 1);
  }
  return spatial_from_coords(c);
}

std::optional<std::size_t> GridSpec::velocity_index(const Vec3& v) const {
  const double w = velocity_width();
  std::array<std::size_t, 3> c{};
  for (int k = 0; k < 3; ++k) {
    if (!(v[k] >= -v_max && v[k] < v_max)) return std::nullopt;
    const int i = static_cast<int>(std::floor((v[k] + v_max) / w));
    c[k] = static_cast<std::size_t>(std::clamp(i, 0, velocity_bins - 1));
  }
  const auto n = static_cast<std::size_t>(velocity_bins);
  return (c[2] * n + c[1]) * n + c[0];
}

std::optional<std::size_t> GridSpec::cell_index(const Vec3& r, const Vec3& v) const {
  const auto w = velocity_index(v);
  if (!w) return std::nullopt;
  return spatial_index(r) * velocity_cells() + *w;
}

std::array<int, 3> GridSpec::spatial_coords(std::size_t s) const {
  const auto nx = static_cast<std::size_t>(spatial_bins[0]);
  const auto ny = static_cast<std::size_t>(spatial_bins[1]);
  return {static_cast<int>(s % nx), static_cast<int>((s / nx) % ny), static_cast<int>(s / (nx * ny))};
}

std::array<int, 3> GridSpec::velocity_coords(std::size_t w) const {
  const auto n = static_cast<std::size_t>(velocity_bins);
  return {static_cast<int>(w % n), static_cast<int>((w / n) % n), static_cast<int>(w / (n * n))};
}

std::size_t GridSpec::spatial_from_coords(const std::array<int, 3>& c) const {
  return (static_cast<std::size_t>(c[2]) * spatial_bins[1] + c[1]) * spatial_bins[0] + c[0];
}

Vec3 GridSpec::spatial_center(std::size_t s) const {
  const auto c = spatial_coords(s);
  return {(c[0] + 0.5) * spatial_width(0), (c[1] + 0.5) * spatial_width(1), (c[2] + 0.5) * spatial_width(2)};
}

Vec3 GridSpec::velocity_center(std::size_t w) const {
  const auto c = velocity_coords(w);
  const double h = velocity_width();
  return {-v_max + (c[0] + 0.5) * h, -v_max + (c[1] + 0.5) * h, -v_max + (c[2] + 0.5) * h};
}

void GridSpec::validate() const {
  for (int k = 0; k < 3; ++k) {
    if (spatial_bins[k] < 1) throw ContractViolation("grid: spatial bin counts must be >= 1");
    if (!(geometry.lengths[k] > 0.0)) throw ContractViolation("grid: box edges must be positive");
  }
  if (velocity_bins < 1) throw ContractViolation("grid: velocity bin count must be >= 1");
  if (!(v_max > 0.0)) throw ContractViolation("grid: v_max must be > 0");
}

PhaseHistogram::PhaseHistogram(const GridSpec& g)
    : grid(g), weight(g.total(), 0), hits(g.total(), 0), weight_sq(g.total(), 0) {
  g.validate();
}

double PhaseHistogram::density(std::size_t cell) const {
  if (normalization == Normalization::raw_counts) return static_cast<double>(weight[cell]);
  if (sample_count == 0) return 0.0;
  return static_cast<double>(weight[cell]) / (static_cast<double>(sample_count) * grid.cell_volume());
}

double PhaseHistogram::standard_error(std::size_t cell) const {
  const double w = static_cast<double>(weight[cell]);
  const double w2 = static_cast<double>(weight_sq[cell]);
  double var;
  if (ensemble_count >= 2) {
    const double m = static_cast<double>(ensemble_count);
    const double mean = w / m;
    const double sample_var = std::max(0.0, (w2 / m - mean * mean)) * m / (m - 1.0);
    var = m * sample_var;
  } else {
    var = std::max(w2, std::abs(w));
  }
  const double se = std::sqrt(var);
  if (normalization == Normalization::raw_counts) return se;
  if (sample_count == 0) return 0.0;
  return se / (static_cast<double>(sample_count) * grid.cell_volume());
}

double PhaseHistogram::integral() const {
  if (sample_count == 0) return 0.0;
  long double s = 0;
  for (auto w : weight) s += w;
  return static_cast<double>(s / static_cast<long double>(sample_count));
}

void PhaseHistogram::add_member(std::span<const Deposit> deposits, std::int64_t particle_count,
                                std::int64_t overflow_count) {
  std::vector<Deposit> sorted(deposits.begin(), deposits.end());
  std::sort(sorted.begin(), sorted.end(), [](const Deposit& a, const Deposit& b) { return a.cell < b.cell; });
  for (std::size_t i = 0; i < sorted.size();) {
    const std::size_t cell = sorted[i].cell;
    std::int64_t w = 0;
    std::int64_t n = 0;
    for (; i < sorted.size() && sorted[i].cell == cell; ++i) {
      w += sorted[i].weight;
      ++n;
    }
    weight[cell] += w;
    hits[cell] += n;
    weight_sq[cell] += w * w;
  }
  sample_count += particle_count;
  overflow += overflow_count;
  ensemble_count += 1;
}

PhaseHistogram merge_estimates(const PhaseHistogram& a, const PhaseHistogram& b) {
  if (!(a.grid == b.grid)) throw GridMismatch("merge_estimates: grid specs differ");
  if (a.normalization != b.normalization) throw GridMismatch("merge_estimates: normalizations differ");
  PhaseHistogram out = a;
  for (std::size_t i = 0; i < out.weight.size(); ++i) {
    out.weight[i] += b.weight[i];
    out.hits[i] += b.hits[i];
    out.weight_sq[i] += b.weight_sq[i];
  }
  out.sample_count += b.sample_count;
  out.ensemble_count += b.ensemble_count;
  out.overflow += b.overflow;
  return out;
}

std::optional<std::string> overflow_warning(const PhaseHistogram& h, std::string_view name) {
  if (h.overflow_fraction() <= 1e-3) return std::nullopt;
  std::ostringstream msg;
  msg << name << ": " << h.overflow << " of " << h.sample_count
      << " deposits fell outside the velocity grid (" << 100.0 * h.overflow_fraction() << "%)";
  return msg.str();
}

}  // namespace bglab
