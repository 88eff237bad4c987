#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nocmap/mapping_state.hpp"
#include "nocmap/routing.hpp"

namespace nocmap {

enum class HeuristicKind { FF, MMC, MAC, NN, PL, BN, Spiral };

[[nodiscard]] std::string_view to_string(HeuristicKind kind);
[[nodiscard]] std::optional<HeuristicKind> parse_heuristic(std::string_view text);
[[nodiscard]] const std::vector<HeuristicKind>& all_heuristics();
/// Spiral routes with the min-load router; the reference heuristics use XY.
[[nodiscard]] RoutePolicy default_route_policy(HeuristicKind kind);

/// Whether candidate scoring may fan out over OpenMP threads.
enum class ExecPolicy { Serial, Parallel };

/// Request to place `task`. `requester` is the tile of the master that triggered it;
/// vms/vsm are the volumes of the triggering edge.
struct MapRequest {
  TaskRef task;
  TaskKind kind = TaskKind::Software;
  std::optional<Coord> requester;
  std::uint64_t vms = 0;
  std::uint64_t vsm = 0;
};

/// Chosen tile (nullopt means MapFailure) and the number of candidate tiles examined.
struct MapOutcome {
  std::optional<Coord> tile;
  std::size_t evaluations = 0;
};

/// Tiles at Chebyshev radius `hop` around `center`, clockwise from the west neighbour:
/// up the west edge, across the north edge, down the east edge, back along the south
/// edge. Off-mesh positions are skipped. Throws InputError for hop < 1.
[[nodiscard]] std::vector<Coord> spiral_ring(const ArchGraph& arch, Coord center, int hop);

/// Tiles at Manhattan distance exactly `n` from `center` in row-major order.
[[nodiscard]] std::vector<Coord> manhattan_shell(const ArchGraph& arch, Coord center, int n);

/// Largest ring radius / shell distance that can still contain an in-mesh tile.
[[nodiscard]] int max_spiral_hop(const ArchGraph& arch, Coord center);
[[nodiscard]] int max_shell_distance(const ArchGraph& arch, Coord center);

/// Free tiles able to host `kind`, in linear index order.
[[nodiscard]] std::vector<Coord> free_compatible_tiles(const MappingState& state, TaskKind kind);

/// Routes both directions of a request edge between requester and candidate the same way
/// the simulator commits them: master->slave first, then slave->master on the updated ledger.
/// Zero-volume directions add nothing.
void commit_request_routes(ChannelLoadLedger& ledger, const ArchGraph& arch, RoutePolicy policy,
                           Coord requester, Coord candidate, std::uint64_t vms, std::uint64_t vsm);

// --- reference heuristics -------------------------------------------------

struct FirstFreeResult {
  MapOutcome outcome;
  std::size_t cursor = 0;
};

/// Round-robin over linear indices starting at `cursor`; the returned cursor points one
/// past the chosen tile (unchanged on failure).
[[nodiscard]] FirstFreeResult map_ff(const MapRequest& req, const MappingState& state,
                                     std::size_t cursor);

[[nodiscard]] MapOutcome map_nn(const MapRequest& req, const MappingState& state);

[[nodiscard]] MapOutcome map_mmc(const MapRequest& req, const MappingState& state,
                                 RoutePolicy policy, ExecPolicy exec = ExecPolicy::Serial);
[[nodiscard]] MapOutcome map_mac(const MapRequest& req, const MappingState& state,
                                 RoutePolicy policy, ExecPolicy exec = ExecPolicy::Serial);
[[nodiscard]] MapOutcome map_pl(const MapRequest& req, const MappingState& state,
                                RoutePolicy policy, ExecPolicy exec = ExecPolicy::Serial);
[[nodiscard]] MapOutcome map_bn(const MapRequest& req, const MappingState& state,
                                RoutePolicy policy, ExecPolicy exec = ExecPolicy::Serial);

// --- spiral ---------------------------------------------------------------

[[nodiscard]] MapOutcome map_spiral(const MapRequest& req, const MappingState& state);

struct Cluster {
  int x_begin = 0;
  int x_end = 0;  // exclusive
  int y_begin = 0;
  int y_end = 0;  // exclusive
  Coord center;

  [[nodiscard]] bool contains(Coord c) const {
    return c.x >= x_begin && c.x < x_end && c.y >= y_begin && c.y < y_end;
  }
};

/// Up to 3x3 rectangular regions covering the mesh, visited in a corner-first admission
/// order. Each slot is held by at most one application at a time.
class ClusterGrid {
 public:
  explicit ClusterGrid(const ArchGraph& arch);

  [[nodiscard]] const std::vector<Cluster>& clusters() const { return clusters_; }
  [[nodiscard]] const std::vector<std::size_t>& admission_order() const { return order_; }
  [[nodiscard]] std::optional<std::size_t> next_free() const;
  [[nodiscard]] std::size_t held_count() const;
  [[nodiscard]] std::optional<int> holder(std::size_t cluster) const { return holder_.at(cluster); }

  void acquire(std::size_t cluster, int app);
  /// Frees whichever slot `app` holds; no-op if it holds none.
  void release(int app);

 private:
  std::vector<Cluster> clusters_;
  std::vector<std::size_t> order_;
  std::vector<std::optional<int>> holder_;
};

struct InitialPlacement {
  MapOutcome outcome;
  std::optional<std::size_t> cluster;
  /// Every cluster is held: the application must wait in the admission queue.
  bool queued = false;
};

/// Picks the center of the next free cluster, falling back to a spiral search around it
/// for the nearest free compatible tile. Acquires the cluster on success.
[[nodiscard]] InitialPlacement place_initial(ClusterGrid& grid, const MapRequest& req,
                                             const MappingState& state);

// --- dispatcher -----------------------------------------------------------

/// Owns the per-run mapping state that outlives single requests (FF cursor, clusters).
class Mapper {
 public:
  Mapper(HeuristicKind kind, RoutePolicy policy, const ArchGraph& arch,
         ExecPolicy exec = ExecPolicy::Serial, bool cluster_initial_for_all = false);

  [[nodiscard]] HeuristicKind kind() const { return kind_; }
  [[nodiscard]] RoutePolicy policy() const { return policy_; }
  [[nodiscard]] const ClusterGrid& clusters() const { return clusters_; }
  [[nodiscard]] bool uses_clusters() const { return use_clusters_; }

  /// Slave task placement. req.requester must be set.
  [[nodiscard]] MapOutcome map_task(const MapRequest& req, const MappingState& state);
  /// Initial task placement for application `req.task.app`.
  [[nodiscard]] InitialPlacement map_initial(const MapRequest& req, const MappingState& state);
  void release_app(int app) { clusters_.release(app); }

 private:
  HeuristicKind kind_;
  RoutePolicy policy_;
  ExecPolicy exec_;
  bool use_clusters_;
  ClusterGrid clusters_;
  std::size_t ff_cursor_ = 0;
};

namespace kernels {

/// Score of one candidate; smaller is better, compared lexicographically.
struct CandidateScore {
  std::uint64_t primary = 0;
  std::uint64_t secondary = 0;
  std::size_t linear_index = 0;
  friend auto operator<=>(const CandidateScore&, const CandidateScore&) = default;
};

enum class Objective {
  PathLoad,     // (path cost both directions, hops both directions)
  PeakLoad,     // (resulting peak, resulting total)
  AverageLoad,  // (resulting total, resulting peak)
};

[[nodiscard]] CandidateScore score_candidate(Objective objective, const MapRequest& req,
                                             const MappingState& state, RoutePolicy policy,
                                             Coord candidate);

/// Reference loop: one candidate after another.
[[nodiscard]] std::vector<CandidateScore> score_candidates_serial(
    Objective objective, const MapRequest& req, const MappingState& state, RoutePolicy policy,
    std::span<const Coord> candidates);

/// OpenMP loop over candidates. Output order matches the input order.
[[nodiscard]] std::vector<CandidateScore> score_candidates_parallel(
    Objective objective, const MapRequest& req, const MappingState& state, RoutePolicy policy,
    std::span<const Coord> candidates);

}  // namespace kernels

namespace fault {
/// Test hook for the verify harness: reverses the final linear-index tie-break of the
/// scored heuristics so the oracle comparison must fail.
void set_flip_tiebreak(bool enabled);
[[nodiscard]] bool flip_tiebreak();
}  // namespace fault

}  // namespace nocmap
