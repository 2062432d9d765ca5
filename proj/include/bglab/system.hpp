#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bglab/vec3.hpp"

namespace bglab {

enum class BoundaryKind { specular_box, periodic_box };

/// Rectangular configuration space. Specular walls sit at 0 and L_k on
/// each axis; a periodic box wraps coordinates into [0, L_k).
struct DomainGeometry {
  BoundaryKind kind = BoundaryKind::periodic_box;
  Vec3 lengths{1.0, 1.0, 1.0};

  double volume() const { return lengths.x * lengths.y * lengths.z; }
  bool periodic() const { return kind == BoundaryKind::periodic_box; }

  /// Displacement a - b, reduced to the minimum image in periodic mode.
  Vec3 displacement(const Vec3& a, const Vec3& b) const;
  /// Wraps a position into the primary cell (identity for specular boxes).
  Vec3 wrap(Vec3 r) const;

  friend bool operator==(const DomainGeometry&, const DomainGeometry&) = default;
};

enum class Mode { standard_gas, sn_model, free_flow };

std::string_view to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view s);
std::string_view to_string(BoundaryKind k);
std::optional<BoundaryKind> parse_boundary(std::string_view s);

struct ParticleState {
  int id = 0;
  Vec3 r;
  Vec3 v;
  double sync_time = 0.0;

  friend bool operator==(const ParticleState&, const ParticleState&) = default;
};

/// A point of the N-particle phase space together with the parameters that
/// define its dynamics. Particle ids equal their index in `particles`.
struct SystemConfig {
  std::vector<ParticleState> particles;
  double d = 0.0;
  double m = 1.0;
  DomainGeometry geometry;
  Mode mode = Mode::standard_gas;
  double time = 0.0;

  std::size_t size() const { return particles.size(); }
};

using IdPair = std::pair<int, int>;  // always first < second

inline IdPair make_pair_ids(int a, int b) { return a < b ? IdPair{a, b} : IdPair{b, a}; }

struct PairClassification {
  std::vector<IdPair> mutually_internal;  // sorted
  int n_int = 0;
  int n_ext = 0;

  friend bool operator==(const PairClassification&, const PairClassification&) = default;
};

// Ordering of the enumerators is the tie-break order for simultaneous events.
enum class EventKind { external_contact = 0, tether_contact = 1, wall = 2 };

std::string_view to_string(EventKind k);

struct EventRecord {
  double time = 0.0;
  EventKind kind = EventKind::external_contact;
  std::array<int, 2> participants{-1, -1};  // second is -1 for wall events
  int wall_id = -1;
  std::array<Vec3, 2> v_before{};
  std::array<Vec3, 2> v_after{};

  int participant_count() const { return participants[1] < 0 ? 1 : 2; }
  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

}  // namespace bglab
