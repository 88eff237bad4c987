#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nocmap/heuristics.hpp"
#include "nocmap/task_graph.hpp"

namespace nocmap {

/// Per-tile-kind timing and energy constants.
struct PlatformParams {
  std::uint64_t isp_cycles_per_instruction = 40;
  std::uint64_t ra_cycles_per_instruction = 20;
  std::uint64_t isp_energy_per_instruction = 10;
  std::uint64_t ra_energy_per_instruction = 20;
  std::uint64_t energy_per_packet_hop = 1;
  /// Cycles the manager spends on each mapping decision before the data can move.
  std::uint64_t manager_overhead = 0;

  [[nodiscard]] std::uint64_t cycles_per_instruction(TileKind kind) const;
  [[nodiscard]] std::uint64_t energy_per_instruction(TileKind kind) const;

  friend bool operator==(const PlatformParams&, const PlatformParams&) = default;
};

/// Throws LogicError if the task cannot run on `tile_kind`.
[[nodiscard]] std::uint64_t compute_time(const Task& task, TileKind tile_kind,
                                         const PlatformParams& params);
[[nodiscard]] std::uint64_t compute_energy(const Task& task, TileKind tile_kind,
                                           const PlatformParams& params);

/// Cycles for a pipelined packet stream: congestion_delay + hops + volume - 1.
/// Zero volume costs nothing; a positive volume over zero hops is a LogicError.
[[nodiscard]] std::uint64_t comm_latency(std::uint64_t volume, std::uint64_t hops,
                                         std::uint64_t congestion_delay);

struct Scenario {
  ArchGraph arch = ArchGraph::default_platform();
  std::vector<TaskGraph> apps;
  /// Arrival cycle per application; empty means everything arrives at cycle 0.
  std::vector<std::uint64_t> arrivals;
  HeuristicKind heuristic = HeuristicKind::Spiral;
  RoutePolicy route_policy = RoutePolicy::ModifiedDijkstra;
  PlatformParams params;
  std::uint64_t seed = 0;
  /// Applications allowed to run at once (initial task placed, not yet finished).
  /// Unset means no cap beyond what the cluster grid or free tiles impose.
  std::optional<std::size_t> max_concurrent_apps;
  /// Use cluster-center initial placement for every heuristic, not just Spiral.
  bool cluster_initial_for_all = false;
  ExecPolicy exec = ExecPolicy::Serial;
};

/// Scenario for `heuristic` with its default route policy and the default admission cap.
[[nodiscard]] Scenario make_scenario(std::vector<TaskGraph> apps, HeuristicKind heuristic,
                                     std::uint64_t seed,
                                     ArchGraph arch = ArchGraph::default_platform());

/// Admission cap used when a scenario is built through make_scenario: the cluster count.
inline constexpr std::size_t kDefaultConcurrentApps = 9;

struct AppReport {
  std::string app_id;
  std::uint64_t arrival = 0;
  std::uint64_t admitted = 0;
  std::uint64_t finished = 0;
  [[nodiscard]] std::uint64_t queue_wait() const { return admitted - arrival; }
};

struct SimReport {
  HeuristicKind heuristic = HeuristicKind::Spiral;
  RoutePolicy route_policy = RoutePolicy::ModifiedDijkstra;
  std::uint64_t seed = 0;
  std::size_t app_count = 0;
  std::uint64_t makespan = 0;
  std::uint64_t total_energy = 0;
  std::uint64_t energy_compute = 0;
  std::uint64_t energy_comm = 0;
  /// Highest single-link ledger load seen during the run.
  std::uint64_t peak_link_load = 0;
  /// Time-weighted mean ledger load per directed link over [0, makespan].
  double avg_link_load = 0.0;
  std::uint64_t mapping_evaluations = 0;
  std::size_t deferred_requests = 0;
  std::size_t max_clusters_held = 0;
  std::vector<AppReport> apps;

  [[nodiscard]] std::uint64_t max_queue_wait() const;
};

enum class EventKind {
  AppArrive,
  AppAdmit,
  TaskMap,
  MapDefer,
  ComputeStart,
  ComputeEnd,
  CommStart,
  CommEnd,
  TaskDone,
  AppDone,
};

[[nodiscard]] std::string_view to_string(EventKind kind);
[[nodiscard]] std::optional<EventKind> parse_event_kind(std::string_view text);

/// One row of the event log. Fields that do not apply to a kind keep their defaults.
struct EventRecord {
  std::uint64_t cycle = 0;
  EventKind kind = EventKind::AppArrive;
  std::string app;
  std::string task;
  std::string peer;
  std::optional<Coord> tile;
  std::optional<TileKind> tile_kind;
  std::uint64_t instructions = 0;
  std::uint64_t volume = 0;
  std::uint64_t hops = 0;
  int cluster = -1;
  Path path;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct SimResult {
  SimReport report;
  std::vector<EventRecord> events;
  MappingState final_state;
};

/// Event-driven run of one scenario. Deterministic in its input.
/// Throws ConfigError when some task kind has no compatible tile, ValidationError for
/// invalid graphs and SimulationError if the run can no longer make progress.
[[nodiscard]] SimResult simulate(const Scenario& scenario);

/// Independent scenarios, optionally on OpenMP threads. Results keep the input order;
/// the first failing cell's exception is rethrown.
[[nodiscard]] std::vector<SimResult> simulate_all(const std::vector<Scenario>& scenarios,
                                                  ExecPolicy exec = ExecPolicy::Serial);

/// Simulates the same workload once per heuristic (each with its default route policy).
/// Cells are independent and may run on OpenMP threads; results keep the input order.
[[nodiscard]] std::vector<SimReport> run_comparison(const std::vector<Scenario>& scenarios,
                                                    ExecPolicy exec = ExecPolicy::Serial);

}  // namespace nocmap
