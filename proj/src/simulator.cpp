#include "bglab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "bglab/errors.hpp"

namespace bglab {

bool Simulator::Later::operator()(const Queued& x, const Queued& y) const {
  return std::tie(x.time, x.kind, x.a, x.b, x.face) > std::tie(y.time, y.kind, y.a, y.b, y.face);
}

Simulator::Simulator(SystemConfig config, SimulatorOptions options)
    : config_(std::move(config)), options_(options) {
  auto& ps = config_.particles;
  if (ps.empty()) throw ContractViolation("Simulator: no particles");
  if (!(config_.d > 0.0) || !(config_.m > 0.0)) throw ContractViolation("Simulator: d and m must be positive");
  now_ = config_.time;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto& p = ps[i];
    if (p.id != static_cast<int>(i)) throw ContractViolation("Simulator: particle ids must equal their index");
    if (!is_finite(p.r) || !is_finite(p.v)) throw ContractViolation("Simulator: non-finite particle state");
    p.r = config_.geometry.wrap(p.r + p.v * (now_ - p.sync_time));
    p.sync_time = now_;
  }

  use_pairs_ = config_.mode != Mode::free_flow;
  if (use_pairs_) {
    const auto cls = classify_pairs(config_);
    // pairs resumed at contact may sit a rounding error inside d
    const double floor = config_.d * (1.0 - tol::overlap_rel);
    if (config_.mode == Mode::standard_gas) {
      for (const auto& [a, b] : cls.mutually_internal)
        if (norm(config_.geometry.displacement(ps[a].r, ps[b].r)) < floor)
          throw ContractViolation("Simulator: overlapping pair in a standard-gas configuration");
    }
    if (config_.mode == Mode::sn_model) tethers_ = cls.mutually_internal;
    grid_ = CellGrid(config_.geometry, config_.d, ps.size());
  } else {
    grid_ = CellGrid(config_.geometry, std::numeric_limits<double>::infinity(), 1);
  }
  partners_.assign(ps.size(), {});
  for (const auto& [a, b] : tethers_) {
    partners_[a].push_back(b);
    partners_[b].push_back(a);
  }
  for (auto& v : partners_) std::sort(v.begin(), v.end());

  cell_members_.assign(grid_.total(), {});
  cell_of_.assign(ps.size(), -1);
  stamp_.assign(ps.size(), 0);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const int c = grid_.index(grid_.coord_of(ps[i].r));
    cell_of_[i] = c;
    cell_members_[c].push_back(static_cast<int>(i));
  }

  for (std::size_t i = 0; i < ps.size(); ++i) {
    const int ii = static_cast<int>(i);
    if (use_pairs_) {
      grid_.neighbors(cell_of_[ii], scratch_a_);
      for (int c : scratch_a_)
        for (int j : cell_members_[c])
          if (j > ii) predict_pair(ii, j);
    }
    predict_boundary(ii);
    predict_crossing(ii);
  }
  compact_threshold_ = std::max<std::size_t>(2 * heap_.size(), 1024 + 16 * ps.size());
}

Vec3 Simulator::position_at(int i, double t) const {
  const auto& p = config_.particles[i];
  return p.r + p.v * (t - p.sync_time);
}

void Simulator::sync(int i) {
  auto& p = config_.particles[i];
  p.r = position_at(i, now_);
  p.sync_time = now_;
}

bool Simulator::is_tether(int i, int j) const {
  const auto& v = partners_[i];
  return std::binary_search(v.begin(), v.end(), j);
}

bool Simulator::stale(const Queued& e) const {
  if (stamp_[e.a] != e.stamp_a) return true;
  return e.b >= 0 && stamp_[e.b] != e.stamp_b;
}

void Simulator::push(const Queued& e) {
  heap_.push_back(e);
  std::push_heap(heap_.begin(), heap_.end(), Later{});
}

void Simulator::compact_queue() {
  std::erase_if(heap_, [this](const Queued& e) { return stale(e); });
  std::make_heap(heap_.begin(), heap_.end(), Later{});
  compact_threshold_ = std::max<std::size_t>(2 * heap_.size(), 1024 + 16 * config_.particles.size());
}

void Simulator::predict_pair(int i, int j) {
  const bool tether = is_tether(i, j);
  std::optional<ContactPrediction> hit;
  try {
    hit = predict_pair_contact(config_.particles[i], config_.particles[j], tether ? PairKind::tether : PairKind::external,
                               config_.d, config_.geometry);
  } catch (const ContractViolation& err) {
    throw InvariantViolation(std::string("penetration detected: ") + err.what());
  }
  if (!hit) return;
  const int a = std::min(i, j);
  const int b = std::max(i, j);
  push({hit->time, tether ? QKind::tether : QKind::external, a, b, -1, stamp_[a], stamp_[b]});
}

void Simulator::predict_boundary(int i) {
  if (config_.geometry.periodic()) return;  // face wrapping is handled by crossing events
  const auto hit = predict_wall_event(config_.particles[i], config_.d, config_.geometry, true);
  if (hit) push({hit->time, QKind::wall, i, -1, hit->face, stamp_[i], 0});
}

void Simulator::predict_crossing(int i) {
  const bool periodic = config_.geometry.periodic();
  const auto& p = config_.particles[i];
  const auto c = grid_.coord(cell_of_[i]);
  const auto& n = grid_.counts();
  double best = std::numeric_limits<double>::infinity();
  int best_face = -1;
  for (int k = 0; k < 3; ++k) {
    const double vk = p.v[k];
    if (vk == 0.0) continue;
    double plane;
    if (vk > 0.0) {
      if (c[k] == n[k] - 1 && !periodic) continue;
      plane = c[k] == n[k] - 1 ? config_.geometry.lengths[k] : (c[k] + 1) * grid_.edge(k);
    } else {
      if (c[k] == 0 && !periodic) continue;
      plane = c[k] * grid_.edge(k);
    }
    const double t = p.sync_time + std::max(0.0, (plane - p.r[k]) / vk);
    if (t < best) {
      best = t;
      best_face = 2 * k + (vk > 0.0 ? 1 : 0);
    }
  }
  if (best_face >= 0) push({best, QKind::crossing, i, -1, best_face, stamp_[i], 0});
}

void Simulator::predict_all(int i) {
  if (use_pairs_) {
    grid_.neighbors(cell_of_[i], scratch_a_);
    for (int c : scratch_a_)
      for (int j : cell_members_[c])
        if (j != i) predict_pair(i, j);
  }
  predict_boundary(i);
  predict_crossing(i);
}

void Simulator::move_to_cell(int i, int cell) {
  auto& from = cell_members_[cell_of_[i]];
  from.erase(std::find(from.begin(), from.end(), i));
  cell_members_[cell].push_back(i);
  cell_of_[i] = cell;
}

void Simulator::process_pair(const Queued& e, const Sinks& sinks) {
  const int i = e.a;
  const int j = e.b;
  sync(i);
  sync(j);
  auto& pi = config_.particles[i];
  auto& pj = config_.particles[j];
  const Vec3 r12 = config_.geometry.displacement(pi.r, pj.r);
  const double dist = norm(r12);
  const double d = config_.d;
  if (std::abs(dist - d) > tol::overlap_rel * d) {
    std::ostringstream msg;
    msg << "penetration detected: pair (" << i << "," << j << ") at distance " << dist << " during contact at t="
        << now_;
    throw InvariantViolation(msg.str());
  }
  const Vec3 n = r12 * (1.0 / dist);
  const double vn = dot(pi.v - pj.v, n);
  const bool tether = e.kind == QKind::tether;
  const bool proper = (tether ? vn > 0.0 : vn < 0.0) && std::abs(vn) >= tol::grazing_speed;
  if (proper) {
    EventRecord rec;
    rec.time = now_;
    rec.kind = tether ? EventKind::tether_contact : EventKind::external_contact;
    rec.participants = {i, j};
    rec.v_before = {pi.v, pj.v};
    // renormalise so the unit-length contract holds to rounding
    const auto out = resolve_pair_collision(pi.v, pj.v, n * (1.0 / norm(n)));
    pi.v = out.v1;
    pj.v = out.v2;
    rec.v_after = {pi.v, pj.v};
    ++events_;
    if (sinks.on_event) sinks.on_event(rec);
  }
  ++stamp_[i];
  ++stamp_[j];
  predict_all(i);
  // pair (i, j) was just predicted from i's side
  if (use_pairs_) {
    grid_.neighbors(cell_of_[j], scratch_a_);
    for (int c : scratch_a_)
      for (int k : cell_members_[c])
        if (k != j && k != i) predict_pair(j, k);
  }
  predict_boundary(j);
  predict_crossing(j);
}

void Simulator::process_wall(const Queued& e, const Sinks& sinks) {
  const int i = e.a;
  sync(i);
  auto& p = config_.particles[i];
  const Vec3 n = face_normal(e.face);
  if (dot(p.v, n) > 0.0) {
    EventRecord rec;
    rec.time = now_;
    rec.kind = EventKind::wall;
    rec.participants = {i, -1};
    rec.wall_id = e.face;
    rec.v_before = {p.v, Vec3{}};
    p.v = resolve_wall_collision(p.v, n);
    rec.v_after = {p.v, Vec3{}};
    ++events_;
    if (sinks.on_event) sinks.on_event(rec);
  }
  ++stamp_[i];
  predict_all(i);
}

void Simulator::process_crossing(const Queued& e) {
  const int i = e.a;
  sync(i);
  auto& p = config_.particles[i];
  const int axis = e.face / 2;
  const int dir = e.face % 2 == 1 ? 1 : -1;
  auto c = grid_.coord(cell_of_[i]);
  const int n = grid_.counts()[axis];
  c[axis] += dir;
  if (c[axis] >= n) {
    c[axis] = 0;
    p.r[axis] -= config_.geometry.lengths[axis];
  } else if (c[axis] < 0) {
    c[axis] = n - 1;
    p.r[axis] += config_.geometry.lengths[axis];
  }
  const int old_cell = cell_of_[i];
  const int new_cell = grid_.index(c);
  if (new_cell != old_cell) {
    move_to_cell(i, new_cell);
    if (use_pairs_) {
      grid_.neighbors(old_cell, scratch_a_);
      grid_.neighbors(new_cell, scratch_b_);
      for (int cell : scratch_b_) {
        if (std::binary_search(scratch_a_.begin(), scratch_a_.end(), cell)) continue;
        for (int j : cell_members_[cell])
          if (j != i) predict_pair(i, j);
      }
    }
  }
  predict_crossing(i);
}

void Simulator::run(const Budget& budget, const Sinks& sinks) {
  const double t0 = now_;
  const double interval = sinks.snapshot_interval;
  std::uint64_t snap_index = 0;
  auto next_snapshot = [&] {
    return interval > 0.0 ? t0 + static_cast<double>(snap_index) * interval
                          : std::numeric_limits<double>::infinity();
  };
  const std::uint64_t event_limit =
      budget.max_events == std::numeric_limits<std::uint64_t>::max() ? budget.max_events : events_ + budget.max_events;
  bool stopped_by_events = false;

  while (true) {
    if (events_ >= event_limit) {
      stopped_by_events = true;
      break;
    }
    while (!heap_.empty() && stale(heap_.front())) {
      std::pop_heap(heap_.begin(), heap_.end(), Later{});
      heap_.pop_back();
    }
    const double t_next = heap_.empty() ? std::numeric_limits<double>::infinity() : heap_.front().time;
    const double horizon = std::min(t_next, budget.max_time);
    while (sinks.on_snapshot && std::isfinite(horizon) && next_snapshot() <= horizon) {
      sinks.on_snapshot(snapshot_at(next_snapshot()));
      ++snap_index;
    }
    if (heap_.empty() || t_next > budget.max_time) break;

    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    const Queued e = heap_.back();
    heap_.pop_back();
    if (e.time < now_ - tol::causality) {
      std::ostringstream msg;
      msg << "causality violation: event at t=" << e.time << " precedes current time " << now_;
      throw InvariantViolation(msg.str());
    }
    now_ = std::max(now_, e.time);
    const std::uint64_t before = events_;
    switch (e.kind) {
      case QKind::external:
      case QKind::tether: process_pair(e, sinks); break;
      case QKind::wall: process_wall(e, sinks); break;
      case QKind::crossing: process_crossing(e); break;
    }
    if (events_ != before && use_pairs_ && options_.audit_interval > 0 && events_ % options_.audit_interval == 0) {
      audit();
    }
    if (heap_.size() > compact_threshold_) compact_queue();
  }

  if (!stopped_by_events && std::isfinite(budget.max_time) && budget.max_time > now_) {
    now_ = budget.max_time;
    for (std::size_t i = 0; i < config_.particles.size(); ++i) sync(static_cast<int>(i));
  }
  config_.time = now_;
}

SystemConfig Simulator::snapshot_at(double t) const {
  SystemConfig out = config_;
  for (std::size_t i = 0; i < out.particles.size(); ++i) {
    auto& p = out.particles[i];
    p.r = config_.geometry.wrap(position_at(static_cast<int>(i), t));
    p.sync_time = t;
  }
  out.time = t;
  return out;
}

void Simulator::audit() const {
  if (!use_pairs_) return;
  const double d = config_.d;
  const auto& geo = config_.geometry;
  std::vector<Vec3> pos(config_.particles.size());
  for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = position_at(static_cast<int>(i), now_);
  std::vector<int> cells;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const int ii = static_cast<int>(i);
    if (!geo.periodic()) {
      for (int k = 0; k < 3; ++k) {
        if (pos[i][k] < 0.5 * d - tol::overlap_rel * d || pos[i][k] > geo.lengths[k] - 0.5 * d + tol::overlap_rel * d) {
          std::ostringstream msg;
          msg << "penetration detected: particle " << ii << " outside the walls at t=" << now_;
          throw InvariantViolation(msg.str());
        }
      }
    }
    grid_.neighbors(cell_of_[ii], cells);
    for (int c : cells) {
      for (int j : cell_members_[c]) {
        if (j <= ii) continue;
        const double dist = norm(geo.displacement(pos[i], pos[j]));
        const bool tether = is_tether(ii, j);
        if ((tether && dist > d + tol::overlap_rel * d) || (!tether && dist < d - tol::overlap_rel * d)) {
          std::ostringstream msg;
          msg << "penetration detected: pair (" << ii << "," << j << ") at distance " << dist << " (d=" << d
              << ") at t=" << now_;
          throw InvariantViolation(msg.str());
        }
      }
    }
  }
}

AdvanceResult advance_system(const SystemConfig& config, const Budget& budget, const Sinks& sinks,
                             SimulatorOptions options) {
  Simulator sim(config, options);
  sim.run(budget, sinks);
  return {sim.snapshot(), sim.events_processed()};
}

}  // namespace bglab
