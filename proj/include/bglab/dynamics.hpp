#pragma once

#include <optional>

#include "bglab/system.hpp"

namespace bglab {

/// Numerical tolerances of the event-driven dynamics (dimensionless).
namespace tol {
inline constexpr double grazing_speed = 1e-12;     // |v12 . n| below this is a no-op contact
inline constexpr double contact_rel = 1e-9;        // times d
inline constexpr double overlap_rel = 1e-8;        // times d
inline constexpr double causality = 1e-9;          // allowed event-time regression
inline constexpr std::uint64_t audit_interval = 10000;
}  // namespace tol

enum class PairKind { external, tether };

/// Pairs at center distance strictly below d are mutually internal.
PairClassification classify_pairs(const SystemConfig& config);

struct ContactPrediction {
  double time;  // absolute time of contact
  EventKind kind;
};

/// Earliest future time at which |r12 + v12 t| = d with the crossing
/// direction that matches `kind` (approaching for external pairs, separating
/// for tethered pairs). Positions are first brought to a common time
/// max(p1.sync_time, p2.sync_time). Contacts whose radial speed at contact is
/// below tol::grazing_speed are reported as misses.
///
/// A pair already at (or numerically just past) contact with the matching
/// crossing direction yields an immediate event at the common time.
std::optional<ContactPrediction> predict_pair_contact(const ParticleState& p1, const ParticleState& p2,
                                                      PairKind kind, double d,
                                                      const DomainGeometry& geometry);

struct BoundaryHit {
  double time;          // absolute
  int face;             // 2*axis + (1 if the face at L_k else 0)
  bool periodic_wrap;   // true when the hit is a periodic face crossing
};

/// Face index helpers: outward unit normal of a face.
Vec3 face_normal(int face);

/// Specular box: earliest time the sphere surface (center offset d/2)
/// touches a wall. Periodic box: earliest time the center crosses a face.
/// Only strictly positive delays are returned unless `allow_immediate`.
std::optional<BoundaryHit> predict_wall_event(const ParticleState& p, double d, const DomainGeometry& geometry,
                                              bool allow_immediate = false);

struct VelocityPair {
  Vec3 v1;
  Vec3 v2;
};

/// Equal-mass elastic impulse along n (unit vector from center 2 to
/// center 1). Used for both external and tether contacts.
VelocityPair resolve_pair_collision(const Vec3& v1, const Vec3& v2, const Vec3& n);

/// Specular reflection off a wall with outward normal n_wall.
Vec3 resolve_wall_collision(const Vec3& v, const Vec3& n_wall);

struct ConservedQuantities {
  double energy = 0.0;
  Vec3 momentum;
};

ConservedQuantities conserved_quantities(const SystemConfig& config);

/// Sum of m|v_i|, the natural scale for relative momentum drift.
double momentum_scale(const SystemConfig& config);

}  // namespace bglab
