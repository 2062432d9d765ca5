#pragma once

#include <vector>

namespace bglab {

/// One member of a Boltzmann-Grad sequence: N d^2 / V = k1, m N / V = k2.
struct ScalingPoint {
  int index = 0;
  long n = 0;
  double epsilon = 0.0;  // 1/N
  double d = 0.0;
  double m = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double volume = 0.0;
  double eta_conv = 0.0;   // N (pi/6) d^3 / V
  double eta_per_volume = 0.0;  // 4 pi n d^3 / (3 V) with n = N / V
};

/// Throws ContractViolation unless k1, k2, V > 0 and counts strictly increase.
std::vector<ScalingPoint> bg_scaling_sequence(double k1, double k2, double volume, const std::vector<long>& counts);

}  // namespace bglab
