#include "bglab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bglab/errors.hpp"

namespace bglab {

PairClassification classify_pairs(const SystemConfig& config) {
  PairClassification out;
  const auto& ps = config.particles;
  const double d2 = config.d * config.d;
  std::vector<char> internal(ps.size(), 0);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      const Vec3 dr = config.geometry.displacement(ps[i].r, ps[j].r);
      if (norm2(dr) < d2) {
        out.mutually_internal.push_back(make_pair_ids(ps[i].id, ps[j].id));
        internal[i] = internal[j] = 1;
      }
    }
  }
  std::sort(out.mutually_internal.begin(), out.mutually_internal.end());
  out.n_int = static_cast<int>(std::count(internal.begin(), internal.end(), 1));
  out.n_ext = static_cast<int>(ps.size()) - out.n_int;
  return out;
}

std::optional<ContactPrediction> predict_pair_contact(const ParticleState& p1, const ParticleState& p2,
                                                      PairKind kind, double d,
                                                      const DomainGeometry& geometry) {
  if (!is_finite(p1.r) || !is_finite(p1.v) || !is_finite(p2.r) || !is_finite(p2.v) ||
      !std::isfinite(p1.sync_time) || !std::isfinite(p2.sync_time) || !std::isfinite(d)) {
    throw ContractViolation("predict_pair_contact: non-finite input");
  }
  const double t_ref = std::max(p1.sync_time, p2.sync_time);
  const Vec3 r1 = p1.r + p1.v * (t_ref - p1.sync_time);
  const Vec3 r2 = p2.r + p2.v * (t_ref - p2.sync_time);
  const Vec3 r12 = geometry.displacement(r1, r2);
  const Vec3 v12 = p1.v - p2.v;

  const double b = dot(r12, v12);
  const double a = norm2(v12);
  const double c = norm2(r12) - d * d;
  const double dist = std::sqrt(norm2(r12));

  if (a == 0.0) {
    if (kind == PairKind::external && dist < d - tol::contact_rel * d)
      throw ContractViolation("predict_pair_contact: external pair overlaps");
    if (kind == PairKind::tether && dist > d + tol::contact_rel * d)
      throw ContractViolation("predict_pair_contact: tethered pair beyond contact");
    return std::nullopt;
  }

  if (kind == PairKind::external) {
    if (dist < d - tol::contact_rel * d)
      throw ContractViolation("predict_pair_contact: external pair overlaps by " + std::to_string(d - dist));
    if (b >= 0.0) return std::nullopt;
    const double disc = b * b - a * c;
    if (disc < 0.0) return std::nullopt;
    const double s = std::sqrt(disc);
    // s/d is the radial relative speed at contact
    if (s < tol::grazing_speed * d) return std::nullopt;
    if (c <= 0.0) return ContactPrediction{t_ref, EventKind::external_contact};
    // small root in citardauq form: c / (-b + s) == (-b - s) / a
    return ContactPrediction{t_ref + c / (-b + s), EventKind::external_contact};
  }

  if (dist > d + tol::contact_rel * d)
    throw ContractViolation("predict_pair_contact: tethered pair beyond contact by " + std::to_string(dist - d));
  const double disc = std::max(b * b - a * c, 0.0);
  const double s = std::sqrt(disc);
  if (s < tol::grazing_speed * d) return std::nullopt;
  if (c >= 0.0 && b >= 0.0) return ContactPrediction{t_ref, EventKind::tether_contact};
  // large root; pick the form without cancellation
  const double dt = b < 0.0 ? (-b + s) / a : -c / (b + s);
  return ContactPrediction{t_ref + dt, EventKind::tether_contact};
}

Vec3 face_normal(int face) {
  Vec3 n;
  n[face / 2] = (face % 2 == 1) ? 1.0 : -1.0;
  return n;
}

std::optional<BoundaryHit> predict_wall_event(const ParticleState& p, double d, const DomainGeometry& geometry,
                                              bool allow_immediate) {
  const bool periodic = geometry.periodic();
  const double margin = periodic ? 0.0 : 0.5 * d;
  std::optional<BoundaryHit> best;
  for (int k = 0; k < 3; ++k) {
    const double vk = p.v[k];
    if (vk == 0.0) continue;
    const int face = 2 * k + (vk > 0.0 ? 1 : 0);
    const double plane = vk > 0.0 ? geometry.lengths[k] - margin : margin;
    double dt = (plane - p.r[k]) / vk;
    if (allow_immediate) {
      dt = std::max(dt, 0.0);
    } else if (!(dt > 0.0)) {
      continue;
    }
    const double t = p.sync_time + dt;
    if (!best || t < best->time) best = BoundaryHit{t, face, periodic};
  }
  return best;
}

VelocityPair resolve_pair_collision(const Vec3& v1, const Vec3& v2, const Vec3& n) {
  if (std::abs(norm2(n) - 1.0) > 1e-12) throw ContractViolation("resolve_pair_collision: normal is not unit length");
  const double vn = dot(v1 - v2, n);
  return {v1 - vn * n, v2 + vn * n};
}

Vec3 resolve_wall_collision(const Vec3& v, const Vec3& n_wall) {
  const double vn = dot(v, n_wall);
  if (!(vn > 0.0)) throw ContractViolation("resolve_wall_collision: particle is not moving toward the wall");
  return v - (2.0 * vn) * n_wall;
}

ConservedQuantities conserved_quantities(const SystemConfig& config) {
  ConservedQuantities q;
  double twice_e = 0.0;
  for (const auto& p : config.particles) {
    twice_e += norm2(p.v);
    q.momentum += p.v;
  }
  q.energy = 0.5 * config.m * twice_e;
  q.momentum *= config.m;
  return q;
}

double momentum_scale(const SystemConfig& config) {
  double s = 0.0;
  for (const auto& p : config.particles) s += norm(p.v);
  return config.m * s;
}

}  // namespace bglab
