#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bglab/system.hpp"

namespace bglab {

inline constexpr double kMaxPackingFraction = 0.3;

struct SamplerSpec {
  int n_external = 0;
  int n_internal_pairs = 0;
  double internal_separation = 0.5;  // dimer center distance as a fraction of d, in (0, 1)
  double temperature = 1.0;
  std::uint64_t seed = 0;
  DomainGeometry geometry;
  double d = 0.0;
  double m = 1.0;
  std::uint64_t max_attempts = 1'000'000;
  /// Ideal-gas control: centers independent and uniform, overlaps allowed.
  bool allow_overlap = false;
};

/// N (pi/6) d^3 / V.
double conventional_volume_fraction(std::size_t n, double d, double volume);

/// Uniform centers in the admissible region with pairwise distance >= d
/// (rejection sampling), zero velocities. Mode is standard-gas, or
/// free-flow when spec.allow_overlap is set.
SystemConfig sample_external_gas(const SamplerSpec& spec);

/// Adds spec.n_internal_pairs dimers at separation internal_separation * d,
/// each member at least d away from every non-partner. Mode becomes
/// s_n-model.
SystemConfig sample_internal_clusters(const SamplerSpec& spec, SystemConfig base);

/// Gaussian components with variance T/m, then total momentum set to zero
/// exactly (as summed in index order).
SystemConfig sample_maxwellian_velocities(SystemConfig config, double temperature, std::uint64_t seed);

/// Counter-propagating beams along x: particle i moves at +beam_speed (even i)
/// or -beam_speed (odd i) plus isotropic Gaussian spread beam_sigma. Momentum
/// is not closed; for even N it vanishes only on average.
SystemConfig sample_two_beam_velocities(SystemConfig config, double beam_speed, double beam_sigma,
                                        std::uint64_t seed);

/// External gas, then dimers when mode is s_n-model, then velocities.
SystemConfig sample_system(const SamplerSpec& spec, Mode mode);

struct Violation {
  std::string code;
  std::string message;
};

/// All rule violations of `config` under `mode`; empty means valid.
std::vector<Violation> validate_configuration(const SystemConfig& config, Mode mode);

}  // namespace bglab
