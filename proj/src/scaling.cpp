#include "bglab/scaling.hpp"

#include <cmath>
#include <numbers>

#include "bglab/errors.hpp"

namespace bglab {

std::vector<ScalingPoint> bg_scaling_sequence(double k1, double k2, double volume, const std::vector<long>& counts) {
  if (!(k1 > 0.0) || !(k2 > 0.0) || !(volume > 0.0))
    throw ContractViolation("bg_scaling_sequence: k1, k2 and V must be positive");
  if (counts.empty()) throw ContractViolation("bg_scaling_sequence: empty particle-count list");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 1) throw ContractViolation("bg_scaling_sequence: particle counts must be positive");
    if (i > 0 && counts[i] <= counts[i - 1])
      throw ContractViolation("bg_scaling_sequence: particle counts must be strictly increasing");
  }
  std::vector<ScalingPoint> out;
  out.reserve(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    ScalingPoint p;
    p.index = static_cast<int>(i);
    p.n = counts[i];
    const double n = static_cast<double>(p.n);
    p.epsilon = 1.0 / n;
    p.d = std::sqrt(k1 * volume / n);
    p.m = k2 * volume / n;
    p.k1 = k1;
    p.k2 = k2;
    p.volume = volume;
    const double d3 = p.d * p.d * p.d;
    p.eta_conv = n * (std::numbers::pi / 6.0) * d3 / volume;
    p.eta_per_volume = 4.0 * std::numbers::pi * (n / volume) * d3 / (3.0 * volume);
    out.push_back(p);
  }
  return out;
}

}  // namespace bglab
