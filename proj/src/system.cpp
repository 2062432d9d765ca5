#include "bglab/system.hpp"

#include <cmath>

namespace bglab {

Vec3 DomainGeometry::displacement(const Vec3& a, const Vec3& b) const {
  Vec3 dr = a - b;
  if (periodic()) {
    for (int k = 0; k < 3; ++k) {
      const double len = lengths[k];
      dr[k] -= len * std::nearbyint(dr[k] / len);
    }
  }
  return dr;
}

Vec3 DomainGeometry::wrap(Vec3 r) const {
  if (!periodic()) return r;
  for (int k = 0; k < 3; ++k) {
    const double len = lengths[k];
    r[k] -= len * std::floor(r[k] / len);
    if (r[k] >= len) r[k] -= len;  // floor rounding at the upper edge
  }
  return r;
}

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::standard_gas: return "standard-gas";
    case Mode::sn_model: return "s_n-model";
    case Mode::free_flow: return "free-flow";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view s) {
  if (s == "standard-gas") return Mode::standard_gas;
  if (s == "s_n-model") return Mode::sn_model;
  if (s == "free-flow") return Mode::free_flow;
  return std::nullopt;
}

std::string_view to_string(BoundaryKind k) {
  return k == BoundaryKind::periodic_box ? "periodic-box" : "specular-box";
}

std::optional<BoundaryKind> parse_boundary(std::string_view s) {
  if (s == "periodic-box") return BoundaryKind::periodic_box;
  if (s == "specular-box") return BoundaryKind::specular_box;
  return std::nullopt;
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::external_contact: return "external-contact";
    case EventKind::tether_contact: return "tether-contact";
    case EventKind::wall: return "wall";
  }
  return "?";
}

}  // namespace bglab
