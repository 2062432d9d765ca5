#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bglab/balance.hpp"
#include "bglab/collision.hpp"
#include "bglab/estimators.hpp"
#include "bglab/histogram.hpp"
#include "bglab/pair_correlation.hpp"
#include "bglab/scaling.hpp"
#include "bglab/system.hpp"

namespace bglab {

struct SweepSpec {
  double k1 = 1.0;
  double k2 = 1.0;
  DomainGeometry geometry;  // its volume is V
  std::vector<long> counts{125, 250, 500};
  /// standard-gas, s_n-model, or free-flow (ideal-gas positions, overlaps allowed).
  Mode mode = Mode::standard_gas;
  /// Fraction of particles bound in dimers for s_n-model sweeps, unless
  /// fixed_internal_pairs is set.
  double internal_fraction = 0.1;
  std::optional<int> fixed_internal_pairs;
  double internal_separation = 0.5;
  int ensemble = 16;
  /// Velocity variance per component T/m, held fixed along the sequence.
  double thermal_variance = 1.0;
  double relax_mean_free_times = 0.0;
  double window_mean_free_times = 0.05;  // spacing of the three diagnostic snapshots
  std::uint64_t max_events_per_member = 50'000'000;
  GridSpec grid;  // geometry is overwritten with `geometry`
  RadialSpec radial;
  AfcSpec afc;
  DepositPolicy policy = DepositPolicy::mask_all;
  bool run_balance = true;
  CollisionOptions collision{200'000, 0, 1u << 16, 0.05};
  std::uint64_t seed = 0;

  /// Throws ContractViolation.
  void validate() const;
};

struct SuccessiveDifference {
  long n_from = 0;
  long n_to = 0;
  double sup = 0.0;
  double l1 = 0.0;
  double noise_l1 = 0.0;  // L1 norm of the combined standard errors
  std::size_t included = 0;
  std::size_t excluded = 0;
};

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double half_width = 0.0;  // 95% confidence half-width of the slope
  double slope_stderr = 0.0;
  double r_squared = 0.0;
  std::vector<double> residuals;  // log(norm) - fitted, per surviving point
  std::size_t used = 0;
  std::size_t excluded = 0;
};

struct PointRecord {
  ScalingPoint point;
  bool complete = false;
  std::string failure;
  int n_internal_pairs = 0;
  double temperature = 0.0;
  double mean_free_time = 0.0;
  double window = 0.0;
  double diagnostic_time = 0.0;
  std::uint64_t events = 0;

  double fhat_mass = 0.0;
  double i2_sup = 0.0;
  double i2_l1 = 0.0;
  double i2_mass = 0.0;
  double i2_ratio = 0.0;  // I2 mass / fhat mass
  std::size_t i2_excluded = 0;
  double afc_metric = 0.0;
  double afc_noise = 0.0;
  double residual_sup = 0.0;
  double residual_l1 = 0.0;
  double residual_noise = 0.0;
  std::optional<BalanceReport> balance;

  /// Algebraic checks |N d^2 / V - k1| / k1 and |m N / V - k2| / k2.
  double k1_error = 0.0;
  double k2_error = 0.0;

  PhaseHistogram f1;  // middle snapshot, kept for cross-point norms
  PhaseHistogram i2;
};

struct SweepReport {
  SweepSpec spec;
  std::string version;
  std::vector<PointRecord> points;
  std::optional<ExponentFit> i2_l1_fit;
  std::optional<ExponentFit> i2_sup_fit;
  std::optional<ExponentFit> afc_fit;
  std::optional<ExponentFit> residual_fit;
  std::vector<std::string> fit_notes;
  std::vector<SuccessiveDifference> successive;
  /// Trend flag, not an assertion: each successive L1 difference is at most
  /// the previous one plus its own noise level.
  bool successive_nonincreasing = true;
  bool complete = true;
};

/// Mean free time 1 / (sqrt(2) pi n d^2 vbar) with vbar = sqrt(8 T / (pi m)).
double mean_free_time(double number_density, double d, double thermal_variance);

/// (sup, L1) of the density difference over cells with at least
/// `min_hits` deposits in the two histograms together.
struct NormPair {
  double sup = 0.0;
  double l1 = 0.0;
  std::size_t included = 0;
  std::size_t excluded = 0;
};
NormPair convergence_norms(const PhaseHistogram& a, const PhaseHistogram& b,
                           std::int64_t min_hits = PhaseHistogram::kWellSampled);

/// Least squares of log(norm) against log(N). Non-positive norms are
/// dropped; fewer than three survivors throws ContractViolation.
ExponentFit fit_decay_exponent(std::span<const std::pair<double, double>> points);

/// Ensemble snapshots at t0, t0 + window and t0 + 2 window.
struct WindowEnsemble {
  std::array<std::vector<SystemConfig>, 3> snapshots;
  std::uint64_t events = 0;
};

/// Simulates make_member(k) for k < members in parallel; snapshots are
/// stored by member index. Throws InvariantViolation naming the first
/// failing member.
WindowEnsemble simulate_window(const std::function<SystemConfig(int)>& make_member, int members, double t0,
                               double window, std::uint64_t max_events_per_member);

/// Generates the member initial state for scaling point `p`, member `k`.
SystemConfig sweep_member_state(const SweepSpec& spec, const ScalingPoint& p, int member);

SweepReport run_bg_sweep(const SweepSpec& spec);

}  // namespace bglab
