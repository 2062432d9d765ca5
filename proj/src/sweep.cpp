#include "bglab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/students_t.hpp>

#include "bglab/errors.hpp"
#include "bglab/residual.hpp"
#include "bglab/rng.hpp"
#include "bglab/sampler.hpp"
#include "bglab/simulator.hpp"

namespace bglab {

void SweepSpec::validate() const {
  if (counts.size() < 3) throw ContractViolation("sweep: at least 3 scaling points are required for exponent fits");
  if (!(ensemble >= 1)) throw ContractViolation("sweep: ensemble must be >= 1");
  if (!(thermal_variance > 0.0)) throw ContractViolation("sweep: thermal_variance must be > 0");
  if (!(window_mean_free_times > 0.0)) throw ContractViolation("sweep: window must be > 0");
  if (!(relax_mean_free_times >= 0.0)) throw ContractViolation("sweep: relaxation time must be >= 0");
  if (!(internal_fraction >= 0.0 && internal_fraction < 1.0))
    throw ContractViolation("sweep: internal_fraction must be in [0, 1)");
  if (fixed_internal_pairs && *fixed_internal_pairs < 0)
    throw ContractViolation("sweep: fixed_internal_pairs must be >= 0");
  GridSpec g = grid;
  g.geometry = geometry;
  g.validate();
}

double mean_free_time(double number_density, double d, double thermal_variance) {
  const double vbar = std::sqrt(8.0 * thermal_variance / std::numbers::pi);
  return 1.0 / (std::sqrt(2.0) * std::numbers::pi * number_density * d * d * vbar);
}

NormPair convergence_norms(const PhaseHistogram& a, const PhaseHistogram& b, std::int64_t min_hits) {
  if (!(a.grid == b.grid)) throw GridMismatch("convergence_norms: grid specs differ");
  NormPair out;
  const double vol = a.grid.cell_volume();
  for (std::size_t c = 0; c < a.weight.size(); ++c) {
    if (a.hits[c] + b.hits[c] < min_hits) {
      ++out.excluded;
      continue;
    }
    ++out.included;
    const double diff = std::abs(a.density(c) - b.density(c));
    out.sup = std::max(out.sup, diff);
    out.l1 += diff * vol;
  }
  return out;
}

ExponentFit fit_decay_exponent(std::span<const std::pair<double, double>> points) {
  std::vector<double> xs, ys;
  ExponentFit fit;
  for (const auto& [n, norm] : points) {
    if (!(norm > 0.0) || !(n > 0.0) || !std::isfinite(norm)) {
      ++fit.excluded;
      continue;
    }
    xs.push_back(std::log(n));
    ys.push_back(std::log(norm));
  }
  const std::size_t k = xs.size();
  if (k < 3) throw ContractViolation("fit_decay_exponent: fewer than 3 points with positive norm");
  fit.used = k;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw ContractViolation("fit_decay_exponent: particle counts must not all coincide");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    fit.residuals.push_back(r);
    sse += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  fit.slope_stderr = std::sqrt(sse / static_cast<double>(k - 2) / sxx);
  const boost::math::students_t dist(static_cast<double>(k - 2));
  fit.half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * fit.slope_stderr;
  return fit;
}

namespace {

int internal_pairs_for(const SweepSpec& spec, long n) {
  if (spec.mode != Mode::sn_model) return 0;
  if (spec.fixed_internal_pairs) return *spec.fixed_internal_pairs;
  return static_cast<int>(std::lround(spec.internal_fraction * static_cast<double>(n) / 2.0));
}

struct MemberRun {
  std::array<SystemConfig, 3> snaps;
  std::uint64_t events = 0;
  std::string error;
};

MemberRun run_member(SystemConfig initial, double t0, double window, std::uint64_t max_events) {
  MemberRun out;
  try {
    Simulator sim(std::move(initial));
    for (int k = 0; k < 3; ++k) {
      const double target = t0 + k * window;
      sim.run(Budget{target, max_events});
      if (sim.now() < target) throw InvariantViolation("event budget exhausted before the diagnostic window");
      out.snaps[static_cast<std::size_t>(k)] = sim.snapshot();
    }
    out.events = sim.events_processed();
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

void fit_into(std::optional<ExponentFit>& slot, std::vector<std::string>& notes, const char* name,
              const std::vector<std::pair<double, double>>& pts) {
  try {
    slot = fit_decay_exponent(pts);
  } catch (const ContractViolation& e) {
    notes.push_back(std::string(name) + ": " + e.what());
  }
}

}  // namespace

SystemConfig sweep_member_state(const SweepSpec& spec, const ScalingPoint& p, int member) {
  const int pairs = internal_pairs_for(spec, p.n);
  SamplerSpec s;
  s.n_internal_pairs = pairs;
  s.n_external = static_cast<int>(p.n) - 2 * pairs;
  s.internal_separation = spec.internal_separation;
  s.temperature = spec.thermal_variance * p.m;
  s.seed = derive_seed(spec.seed, {static_cast<std::uint64_t>(p.index), static_cast<std::uint64_t>(member)});
  s.geometry = spec.geometry;
  s.d = p.d;
  s.m = p.m;
  return sample_system(s, spec.mode);
}

WindowEnsemble simulate_window(const std::function<SystemConfig(int)>& make_member, int members, double t0,
                               double window, std::uint64_t max_events_per_member) {
  std::vector<MemberRun> runs(static_cast<std::size_t>(members));
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < members; ++k) {
    MemberRun& r = runs[static_cast<std::size_t>(k)];
    try {
      r = run_member(make_member(k), t0, window, max_events_per_member);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  }
  WindowEnsemble out;
  for (int k = 0; k < members; ++k) {
    auto& r = runs[static_cast<std::size_t>(k)];
    if (!r.error.empty()) throw InvariantViolation("member " + std::to_string(k) + " failed: " + r.error);
    out.events += r.events;
    for (std::size_t i = 0; i < 3; ++i) out.snapshots[i].push_back(std::move(r.snaps[i]));
  }
  return out;
}

SweepReport run_bg_sweep(const SweepSpec& spec) {
  spec.validate();
  SweepReport report;
  report.spec = spec;
  report.spec.grid.geometry = spec.geometry;
  report.version = BGLAB_VERSION;
  const GridSpec& grid = report.spec.grid;
  const double volume = spec.geometry.volume();
  const auto sequence = bg_scaling_sequence(spec.k1, spec.k2, volume, spec.counts);

  for (const auto& p : sequence) {
    PointRecord rec;
    rec.point = p;
    rec.n_internal_pairs = internal_pairs_for(spec, p.n);
    rec.temperature = spec.thermal_variance * p.m;
    rec.k1_error = std::abs(static_cast<double>(p.n) * p.d * p.d / volume - spec.k1) / spec.k1;
    rec.k2_error = std::abs(p.m * static_cast<double>(p.n) / volume - spec.k2) / spec.k2;
    rec.mean_free_time = mean_free_time(static_cast<double>(p.n) / volume, p.d, spec.thermal_variance);
    rec.window = spec.window_mean_free_times * rec.mean_free_time;
    const double t0 = spec.relax_mean_free_times * rec.mean_free_time;
    rec.diagnostic_time = t0 + rec.window;

    try {
      auto ens = simulate_window([&](int k) { return sweep_member_state(spec, p, k); }, spec.ensemble, t0, rec.window,
                                 spec.max_events_per_member);
      rec.events = ens.events;
      auto& snaps = ens.snapshots;

      const auto before = estimate_klimontovich(snaps[0], grid, p.d, spec.policy).f1;
      auto middle = estimate_klimontovich(snaps[1], grid, p.d, spec.policy);
      const auto after = estimate_klimontovich(snaps[2], grid, p.d, spec.policy).f1;

      const auto overlap = overlap_magnitude(middle.i2);
      rec.i2_sup = overlap.sup;
      rec.i2_l1 = overlap.l1;
      rec.i2_mass = overlap.mass;
      rec.fhat_mass = middle.fhat.integral();
      rec.i2_ratio = rec.fhat_mass > 0.0 ? rec.i2_mass / rec.fhat_mass : 0.0;
      for (std::size_t c = 0; c < middle.i2.hits.size(); ++c)
        if (!middle.i2.well_sampled(c)) ++rec.i2_excluded;

      const auto pc = estimate_pair_correlation(snaps[1], spec.radial, spec.afc);
      rec.afc_metric = pc.afc.metric;
      rec.afc_noise = pc.afc.noise_bound;

      const std::array<PhaseHistogram, 3> series{before, middle.f1, after};
      const auto residual = free_streaming_residual(series, rec.window, rec.diagnostic_time);
      if (spec.run_balance && middle.f1.integral() > 0.0) {
        CollisionOptions co = spec.collision;
        co.seed = derive_seed(spec.seed, {static_cast<std::uint64_t>(p.index), 0xC0111DEull});
        const auto collision = collision_integral_mc(middle.f1, p.d, static_cast<double>(p.n), co);
        rec.balance = hierarchy_balance_report(residual, collision, std::span(&middle.i2, 1));
        rec.residual_sup = rec.balance->masked_residual_sup;
        rec.residual_l1 = rec.balance->masked_residual_l1;
        rec.residual_noise = rec.balance->masked_residual_noise;
      } else {
        const double vol = grid.cell_volume();
        for (std::size_t c = 0; c < residual.value.size(); ++c) {
          if (!residual.well_sampled(c)) continue;
          rec.residual_sup = std::max(rec.residual_sup, std::abs(residual.value[c]));
          rec.residual_l1 += std::abs(residual.value[c]) * vol;
          rec.residual_noise = std::max(rec.residual_noise, 3.0 * residual.error[c]);
        }
      }
      rec.f1 = std::move(middle.f1);
      rec.i2 = std::move(middle.i2);
      rec.complete = true;
    } catch (const std::exception& e) {
      rec.failure = e.what();
      report.complete = false;
    }
    report.points.push_back(std::move(rec));
  }

  std::vector<std::pair<double, double>> l1, sup, afc, res;
  for (const auto& r : report.points) {
    if (!r.complete) continue;
    const double n = static_cast<double>(r.point.n);
    l1.emplace_back(n, r.i2_l1);
    sup.emplace_back(n, r.i2_sup);
    afc.emplace_back(n, r.afc_metric);
    res.emplace_back(n, r.residual_l1);
  }
  fit_into(report.i2_l1_fit, report.fit_notes, "I2 L1 exponent", l1);
  fit_into(report.i2_sup_fit, report.fit_notes, "I2 sup exponent", sup);
  fit_into(report.afc_fit, report.fit_notes, "AFC exponent", afc);
  fit_into(report.residual_fit, report.fit_notes, "masked residual exponent", res);

  const PointRecord* prev = nullptr;
  for (const auto& r : report.points) {
    if (!r.complete) continue;
    if (prev) {
      SuccessiveDifference sd;
      sd.n_from = prev->point.n;
      sd.n_to = r.point.n;
      const auto norms = convergence_norms(prev->f1, r.f1);
      sd.sup = norms.sup;
      sd.l1 = norms.l1;
      sd.included = norms.included;
      sd.excluded = norms.excluded;
      const double vol = grid.cell_volume();
      for (std::size_t c = 0; c < r.f1.hits.size(); ++c)
        if (prev->f1.hits[c] + r.f1.hits[c] >= PhaseHistogram::kWellSampled)
          sd.noise_l1 += std::hypot(prev->f1.standard_error(c), r.f1.standard_error(c)) * vol;
      if (!report.successive.empty() && sd.l1 > report.successive.back().l1 + sd.noise_l1)
        report.successive_nonincreasing = false;
      report.successive.push_back(sd);
    }
    prev = &r;
  }
  return report;
}

}  // namespace bglab
