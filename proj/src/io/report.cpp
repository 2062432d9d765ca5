#include "bglab/io/report.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace bglab::io {
namespace {

using oj = nlohmann::ordered_json;

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

oj moment_json(const MomentCheck& m) {
  return {{"value", m.value}, {"error", m.error}, {"roundoff", m.roundoff}, {"consistent_with_zero", m.consistent_with_zero()}};
}

oj point_json(const PointRecord& p) {
  oj j;
  j["index"] = p.point.index;
  j["n"] = p.point.n;
  j["epsilon"] = p.point.epsilon;
  j["d"] = p.point.d;
  j["m"] = p.point.m;
  j["k1"] = p.point.k1;
  j["k2"] = p.point.k2;
  j["volume"] = p.point.volume;
  j["eta_conv"] = p.point.eta_conv;
  j["eta_per_volume"] = p.point.eta_per_volume;
  j["complete"] = p.complete;
  j["failure"] = p.failure;
  j["n_internal_pairs"] = p.n_internal_pairs;
  j["temperature"] = p.temperature;
  j["mean_free_time"] = p.mean_free_time;
  j["window"] = p.window;
  j["diagnostic_time"] = p.diagnostic_time;
  j["events"] = p.events;
  j["invariants"] = {{"k1_relative_error", p.k1_error}, {"k2_relative_error", p.k2_error}};
  j["i2"] = {{"sup", p.i2_sup},   {"l1", p.i2_l1},           {"mass", p.i2_mass},
             {"ratio", p.i2_ratio}, {"fhat_mass", p.fhat_mass}, {"excluded_cells", p.i2_excluded}};
  j["afc"] = {{"metric", p.afc_metric}, {"noise_bound", p.afc_noise}};
  j["masked_residual"] = {{"sup", p.residual_sup}, {"l1", p.residual_l1}, {"noise", p.residual_noise}};
  j["balance"] = p.balance ? balance_summary_json(*p.balance) : oj(nullptr);
  return j;
}

}  // namespace

oj grid_json(const GridSpec& g) {
  return {{"spatial_bins", g.spatial_bins},
          {"velocity_bins", g.velocity_bins},
          {"v_max", g.v_max},
          {"geometry",
           {{"boundary", std::string(to_string(g.geometry.kind))},
            {"lengths", {g.geometry.lengths.x, g.geometry.lengths.y, g.geometry.lengths.z}}}}};
}

oj balance_summary_json(const BalanceReport& r) {
  oj j;
  j["spatial_marginal"] = r.spatial_marginal;
  j["time"] = r.time;
  j["dt"] = r.dt;
  j["tolerance"] = r.tolerance;
  j["norms"] = {{"sup_lhs", r.sup_lhs}, {"sup_rhs", r.sup_rhs}, {"sup_diff", r.sup_diff},
                {"l1_lhs", r.l1_lhs},   {"l1_rhs", r.l1_rhs},   {"l1_diff", r.l1_diff}};
  j["relative_discrepancy"] = r.relative_discrepancy;
  j["noise_sup"] = r.noise_sup;
  j["within_tolerance"] = r.within_tolerance;
  j["within_noise"] = r.within_noise;
  j["included_cells"] = r.included_cells;
  j["excluded_cells"] = r.excluded_cells;
  j["masked_residual"] = {{"sup", r.masked_residual_sup},
                          {"l1", r.masked_residual_l1},
                          {"noise", r.masked_residual_noise},
                          {"cells", r.masked_residual_cells}};
  auto series = oj::array();
  for (const auto& o : r.overlap_series) series.push_back({{"mass", o.mass}, {"sup", o.sup}, {"l1", o.l1}});
  j["overlap_series"] = std::move(series);
  j["collision"] = {{"scale", r.collision_scale},
                    {"samples", r.collision_samples},
                    {"budget_insufficient", r.collision_budget_insufficient}};
  j["provenance"] = r.provenance;
  return j;
}

oj to_json(const BalanceReport& r) {
  oj j = balance_summary_json(r);
  j["kind"] = "balance-report";
  j["version"] = BGLAB_VERSION;
  j["cells"] = {{"lhs", r.lhs}, {"lhs_error", r.lhs_error}, {"rhs", r.rhs}, {"rhs_error", r.rhs_error}, {"included", r.included}};
  return j;
}

oj to_json(const SweepSpec& s) {
  oj j;
  j["k1"] = s.k1;
  j["k2"] = s.k2;
  j["geometry"] = {{"boundary", std::string(to_string(s.geometry.kind))},
                   {"lengths", {s.geometry.lengths.x, s.geometry.lengths.y, s.geometry.lengths.z}}};
  j["counts"] = s.counts;
  j["mode"] = std::string(to_string(s.mode));
  j["internal_fraction"] = s.internal_fraction;
  j["fixed_internal_pairs"] = s.fixed_internal_pairs ? oj(*s.fixed_internal_pairs) : oj(nullptr);
  j["internal_separation"] = s.internal_separation;
  j["ensemble"] = s.ensemble;
  j["thermal_variance"] = s.thermal_variance;
  j["relax_mean_free_times"] = s.relax_mean_free_times;
  j["window_mean_free_times"] = s.window_mean_free_times;
  j["max_events_per_member"] = s.max_events_per_member;
  j["grid"] = grid_json(s.grid);
  j["radial"] = {{"bins", s.radial.bins}, {"r_max", s.radial.r_max}};
  j["afc"] = {{"spatial_bins", s.afc.spatial_bins}, {"velocity_bins", s.afc.velocity_bins}, {"v_max", s.afc.v_max}};
  j["policy"] = s.policy == DepositPolicy::mask_all ? "mask_all" : "external_only";
  j["run_balance"] = s.run_balance;
  j["collision_samples"] = s.collision.samples;
  j["seed"] = s.seed;
  return j;
}

oj to_json(const ExponentFit& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"half_width", f.half_width},
          {"slope_stderr", f.slope_stderr},
          {"r_squared", f.r_squared},
          {"residuals", f.residuals},
          {"used", f.used},
          {"excluded", f.excluded}};
}

oj to_json(const SweepReport& r) {
  oj j;
  j["kind"] = "sweep-report";
  j["version"] = r.version;
  j["spec"] = to_json(r.spec);
  j["complete"] = r.complete;
  auto pts = oj::array();
  for (const auto& p : r.points) pts.push_back(point_json(p));
  j["points"] = std::move(pts);
  auto fit = [](const std::optional<ExponentFit>& f) { return f ? to_json(*f) : oj(nullptr); };
  // Exponents and successive differences are finite-N proxies for the limit
  // statements, not tests of them.
  j["proxies"] = {{"i2_l1_exponent", fit(r.i2_l1_fit)},
                  {"i2_sup_exponent", fit(r.i2_sup_fit)},
                  {"afc_exponent", fit(r.afc_fit)},
                  {"masked_residual_exponent", fit(r.residual_fit)},
                  {"fit_notes", r.fit_notes}};
  auto succ = oj::array();
  for (const auto& s : r.successive)
    succ.push_back({{"n_from", s.n_from},
                    {"n_to", s.n_to},
                    {"sup", s.sup},
                    {"l1", s.l1},
                    {"noise_l1", s.noise_l1},
                    {"included", s.included},
                    {"excluded", s.excluded}});
  j["proxies"]["successive_differences"] = std::move(succ);
  j["proxies"]["successive_nonincreasing"] = r.successive_nonincreasing;
  return j;
}

oj to_json(const CollisionField& c) {
  oj j;
  j["grid"] = grid_json(c.grid);
  j["spatially_resolved"] = c.spatially_resolved;
  j["samples"] = c.samples;
  j["scale"] = c.scale;
  j["overflow"] = c.overflow;
  j["budget_insufficient"] = c.budget_insufficient;
  static constexpr const char* names[] = {"mass", "momentum_x", "momentum_y", "momentum_z", "energy"};
  for (int q = 0; q < 5; ++q) j["moments"][names[q]] = moment_json(c.moments[static_cast<std::size_t>(q)]);
  j["value"] = c.value;
  j["error"] = c.error;
  return j;
}

oj to_json(const PairHistogram& g) {
  oj j;
  j["bins"] = g.spec.bins;
  j["r_max"] = g.spec.r_max;
  j["ensemble_count"] = g.ensemble_count;
  j["counts"] = g.counts;
  std::vector<double> gv, ge;
  for (int b = 0; b < g.spec.bins; ++b) {
    gv.push_back(g.g(b));
    ge.push_back(g.g_error(b));
  }
  j["g"] = gv;
  j["g_error"] = ge;
  return j;
}

oj to_json(const AfcResult& a) {
  return {{"metric", a.metric},
          {"noise_bound", a.noise_bound},
          {"determinate_bins", a.determinate_bins},
          {"indeterminate_bins", a.indeterminate_bins},
          {"one_particle_counts", a.one_particle_counts},
          {"pair_counts", a.pair_counts}};
}

std::string summary_text(const BalanceReport& r) {
  std::ostringstream o;
  o << "Hierarchy balance at t = " << r.time << " (stencil dt = " << r.dt << ")\n";
  o << "  comparison: " << (r.spatial_marginal ? "velocity marginal" : "full phase grid") << ", " << r.included_cells
    << " cells included, " << r.excluded_cells << " excluded\n";
  o << "  sup|LHS| = " << r.sup_lhs << "  sup|RHS| = " << r.sup_rhs << "  sup|LHS-RHS| = " << r.sup_diff << '\n';
  o << "  relative discrepancy = " << r.relative_discrepancy << " (tolerance " << r.tolerance << ", "
    << (r.within_tolerance ? "within" : "outside") << ")\n";
  o << "  3-sigma noise level = " << r.noise_sup << (r.within_noise ? " (discrepancy within noise)" : "") << '\n';
  o << "  masked residual: sup = " << r.masked_residual_sup << ", L1 = " << r.masked_residual_l1 << '\n';
  for (std::size_t i = 0; i < r.overlap_series.size(); ++i)
    o << "  I2 snapshot " << i << ": mass = " << r.overlap_series[i].mass << ", sup = " << r.overlap_series[i].sup << '\n';
  if (r.collision_budget_insufficient) o << "  note: collision sample budget below the requested relative error\n";
  return o.str();
}

std::string summary_text(const SweepReport& r) {
  std::ostringstream o;
  o << "Boltzmann-Grad sweep (" << to_string(r.spec.mode) << "), k1 = " << r.spec.k1 << ", k2 = " << r.spec.k2
    << ", version " << r.version << '\n';
  auto col = [&o](auto x) { o << std::setw(13) << x; };
  o << "  " << std::left;
  for (const char* h : {"N", "d", "I2 sup", "I2 L1", "AFC", "residual L1"}) col(h);
  o << '\n';
  for (const auto& p : r.points) {
    o << "  ";
    col(p.point.n);
    col(p.point.d);
    if (!p.complete) {
      o << "incomplete: " << p.failure << '\n';
      continue;
    }
    col(p.i2_sup);
    col(p.i2_l1);
    col(p.afc_metric);
    col(p.residual_l1);
    o << '\n';
  }
  o << std::right;
  auto line = [&o](const char* name, const std::optional<ExponentFit>& f) {
    if (f)
      o << "  fitted " << name << " exponent: " << f->slope << " +/- " << f->half_width << " (95%, " << f->used
        << " points)\n";
    else
      o << "  fitted " << name << " exponent: not available\n";
  };
  line("I2 L1", r.i2_l1_fit);
  line("I2 sup", r.i2_sup_fit);
  line("AFC", r.afc_fit);
  line("masked residual L1", r.residual_fit);
  for (const auto& n : r.fit_notes) o << "  note: " << n << '\n';
  for (const auto& s : r.successive)
    o << "  |f1(" << s.n_to << ") - f1(" << s.n_from << ")|: sup = " << s.sup << ", L1 = " << s.l1 << '\n';
  o << "  successive differences non-increasing (trend flag): " << (r.successive_nonincreasing ? "yes" : "no") << '\n';
  o << "  exponents and differences are finite-N proxies for the limit statements\n";
  return o.str();
}

std::string sweep_points_csv(const SweepReport& r) {
  std::ostringstream o;
  o << "index,n,epsilon,d,m,k1,k2,eta_conv,eta_per_volume,complete,events,i2_sup,i2_l1,i2_mass,i2_ratio,afc_metric,"
       "afc_noise,residual_sup,residual_l1,balance_relative_discrepancy,k1_relative_error,k2_relative_error\n";
  for (const auto& p : r.points) {
    o << p.point.index << ',' << p.point.n << ',' << num(p.point.epsilon) << ',' << num(p.point.d) << ','
      << num(p.point.m) << ',' << num(p.point.k1) << ',' << num(p.point.k2) << ',' << num(p.point.eta_conv) << ','
      << num(p.point.eta_per_volume) << ',' << (p.complete ? 1 : 0) << ',' << p.events << ',' << num(p.i2_sup) << ','
      << num(p.i2_l1) << ',' << num(p.i2_mass) << ',' << num(p.i2_ratio) << ',' << num(p.afc_metric) << ','
      << num(p.afc_noise) << ',' << num(p.residual_sup) << ',' << num(p.residual_l1) << ','
      << (p.balance ? num(p.balance->relative_discrepancy) : "") << ',' << num(p.k1_error) << ','
      << num(p.k2_error) << '\n';
  }
  return o.str();
}

std::string sweep_successive_csv(const SweepReport& r) {
  std::ostringstream o;
  o << "n_from,n_to,sup,l1,noise_l1,included,excluded\n";
  for (const auto& s : r.successive)
    o << s.n_from << ',' << s.n_to << ',' << num(s.sup) << ',' << num(s.l1) << ',' << num(s.noise_l1) << ','
      << s.included << ',' << s.excluded << '\n';
  return o.str();
}

std::string balance_cells_csv(const BalanceReport& r) {
  std::ostringstream o;
  o << "cell,lhs,lhs_error,rhs,rhs_error,included\n";
  for (std::size_t c = 0; c < r.comparison_cells; ++c)
    o << c << ',' << num(r.lhs[c]) << ',' << num(r.lhs_error[c]) << ',' << num(r.rhs[c]) << ',' << num(r.rhs_error[c])
      << ',' << static_cast<int>(r.included[c]) << '\n';
  return o.str();
}

std::string histogram_csv(const PhaseHistogram& h) {
  std::ostringstream o;
  o << "cell,ix,iy,iz,ivx,ivy,ivz,x,y,z,vx,vy,vz,weight,hits,weight_sq,density,standard_error\n";
  const std::size_t nv = h.grid.velocity_cells();
  for (std::size_t c = 0; c < h.weight.size(); ++c) {
    if (h.hits[c] == 0) continue;
    const auto si = h.grid.spatial_coords(c / nv);
    const auto vi = h.grid.velocity_coords(c % nv);
    const Vec3 r = h.grid.spatial_center(c / nv);
    const Vec3 v = h.grid.velocity_center(c % nv);
    o << c << ',' << si[0] << ',' << si[1] << ',' << si[2] << ',' << vi[0] << ',' << vi[1] << ',' << vi[2] << ','
      << num(r.x) << ',' << num(r.y) << ',' << num(r.z) << ',' << num(v.x) << ',' << num(v.y) << ',' << num(v.z) << ','
      << h.weight[c] << ',' << h.hits[c] << ',' << h.weight_sq[c] << ',' << num(h.density(c)) << ','
      << num(h.standard_error(c)) << '\n';
  }
  return o.str();
}

nlohmann::ordered_json histogram_header_json(const PhaseHistogram& h, const std::string& table) {
  std::size_t occupied = 0;
  for (auto n : h.hits) occupied += n > 0 ? 1 : 0;
  nlohmann::ordered_json j;
  j["format"] = "bglab-histogram";
  j["table"] = table;
  j["grid"] = grid_json(h.grid);
  j["normalization"] = h.normalization == Normalization::probability_density ? "probability_density" : "raw_counts";
  j["sample_count"] = h.sample_count;
  j["ensemble_count"] = h.ensemble_count;
  j["overflow"] = h.overflow;
  j["cells"] = h.grid.total();
  j["rows"] = occupied;
  j["integral"] = h.integral();
  return j;
}

std::string pair_correlation_csv(const PairHistogram& g) {
  std::ostringstream o;
  o << "bin,r_lower,r_center,count,ideal,g,g_error,indeterminate\n";
  for (int b = 0; b < g.spec.bins; ++b)
    o << b << ',' << num(g.lower_edge(b)) << ',' << num(g.center(b)) << ',' << g.counts[static_cast<std::size_t>(b)]
      << ',' << num(g.ideal_expectation(b)) << ',' << num(g.g(b)) << ',' << num(g.g_error(b)) << ','
      << (g.indeterminate(b) ? 1 : 0) << '\n';
  return o.str();
}

std::vector<std::string> emit_report(const SweepReport& r, const OutputDir& dir, const std::string& stem) {
  std::vector<std::string> names{stem + "_report.json", stem + "_summary.txt", stem + "_points.csv",
                                 stem + "_successive.csv"};
  dir.write(names[0], to_json(r).dump(2) + "\n");
  dir.write(names[1], summary_text(r));
  dir.write(names[2], sweep_points_csv(r));
  dir.write(names[3], sweep_successive_csv(r));
  return names;
}

std::vector<std::string> emit_report(const BalanceReport& r, const OutputDir& dir, const std::string& stem) {
  std::vector<std::string> names{stem + "_report.json", stem + "_summary.txt", stem + "_cells.csv"};
  dir.write(names[0], to_json(r).dump(2) + "\n");
  dir.write(names[1], summary_text(r));
  dir.write(names[2], balance_cells_csv(r));
  return names;
}

}  // namespace bglab::io
