#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "bglab/cell_list.hpp"
#include "bglab/dynamics.hpp"
#include "bglab/system.hpp"

namespace bglab {

struct Budget {
  double max_time = std::numeric_limits<double>::infinity();  // absolute end time
  std::uint64_t max_events = std::numeric_limits<std::uint64_t>::max();

  static Budget until(double t) { return {t, std::numeric_limits<std::uint64_t>::max()}; }
  static Budget events(std::uint64_t n) { return {std::numeric_limits<double>::infinity(), n}; }
};

/// Consumers of the simulation output. Both are invoked on the thread that
/// owns the simulation.
struct Sinks {
  std::function<void(const EventRecord&)> on_event;
  std::function<void(const SystemConfig&)> on_snapshot;
  /// Snapshot cadence in time units; 0 disables periodic snapshots.
  double snapshot_interval = 0.0;
};

struct SimulatorOptions {
  std::uint64_t audit_interval = tol::audit_interval;
};

/// Exact event-driven integrator for hard spheres, S_N spheres with
/// tethered mutually-internal pairs, and free flow.
///
/// Events live in a binary heap stamped with per-particle collision counts;
/// an entry is stale once any participant has changed velocity since it was
/// scheduled. Positions are advanced lazily: particle i stores its position
/// at sync_time[i].
class Simulator {
 public:
  explicit Simulator(SystemConfig config, SimulatorOptions options = {});

  /// Processes events in chronological order until the budget is exhausted.
  /// On a time budget the system ends synchronized at exactly max_time.
  void run(const Budget& budget, const Sinks& sinks = {});

  double now() const { return now_; }
  std::uint64_t events_processed() const { return events_; }
  const std::vector<IdPair>& tethered_pairs() const { return tethers_; }

  /// Microstate at the current time, all particles synchronized and
  /// positions wrapped into the box.
  SystemConfig snapshot() const { return snapshot_at(now_); }

  /// Full pair-distance check at the current time. Throws
  /// InvariantViolation("penetration detected") on failure.
  void audit() const;

 private:
  enum class QKind : int { external = 0, tether = 1, wall = 2, crossing = 3 };

  struct Queued {
    double time;
    QKind kind;
    int a;
    int b;      // -1 for single-particle events
    int face;   // wall face or crossing face; -1 for pair events
    std::uint64_t stamp_a;
    std::uint64_t stamp_b;
  };
  struct Later {
    bool operator()(const Queued& x, const Queued& y) const;
  };

  SystemConfig snapshot_at(double t) const;
  Vec3 position_at(int i, double t) const;
  void sync(int i);
  bool is_tether(int i, int j) const;
  bool stale(const Queued& e) const;
  void push(const Queued& e);
  void predict_all(int i);
  void predict_pair(int i, int j);
  void predict_boundary(int i);
  void predict_crossing(int i);
  void process_pair(const Queued& e, const Sinks& sinks);
  void process_wall(const Queued& e, const Sinks& sinks);
  void process_crossing(const Queued& e);
  void move_to_cell(int i, int cell);
  void compact_queue();

  SystemConfig config_;
  SimulatorOptions options_;
  CellGrid grid_;
  bool use_pairs_ = true;
  std::vector<std::vector<int>> cell_members_;
  std::vector<int> cell_of_;
  std::vector<std::uint64_t> stamp_;
  std::vector<std::vector<int>> partners_;  // tethered partners, sorted
  std::vector<IdPair> tethers_;
  std::vector<Queued> heap_;  // min-heap under Later
  std::size_t compact_threshold_ = 0;
  std::vector<int> scratch_a_;
  std::vector<int> scratch_b_;
  double now_ = 0.0;
  std::uint64_t events_ = 0;
};

struct AdvanceResult {
  SystemConfig final_config;
  std::uint64_t events = 0;
};

/// Convenience wrapper: simulate `config` under `budget`, streaming events
/// and snapshots to `sinks`.
AdvanceResult advance_system(const SystemConfig& config, const Budget& budget, const Sinks& sinks = {},
                             SimulatorOptions options = {});

}  // namespace bglab
