#include "nocmap/heuristics.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <tuple>

#include "nocmap/errors.hpp"

namespace nocmap {

namespace fault {
namespace {
std::atomic<bool> g_flip_tiebreak{false};
}
void set_flip_tiebreak(bool enabled) { g_flip_tiebreak.store(enabled); }
bool flip_tiebreak() { return g_flip_tiebreak.load(); }
}  // namespace fault

std::string_view to_string(HeuristicKind kind) {
  switch (kind) {
    case HeuristicKind::FF: return "ff";
    case HeuristicKind::MMC: return "mmc";
    case HeuristicKind::MAC: return "mac";
    case HeuristicKind::NN: return "nn";
    case HeuristicKind::PL: return "pl";
    case HeuristicKind::BN: return "bn";
    case HeuristicKind::Spiral: return "spiral";
  }
  return "?";
}

const std::vector<HeuristicKind>& all_heuristics() {
  static const std::vector<HeuristicKind> all = {HeuristicKind::FF, HeuristicKind::MMC,
                                                 HeuristicKind::MAC, HeuristicKind::NN,
                                                 HeuristicKind::PL, HeuristicKind::BN,
                                                 HeuristicKind::Spiral};
  return all;
}

std::optional<HeuristicKind> parse_heuristic(std::string_view text) {
  for (HeuristicKind kind : all_heuristics()) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

RoutePolicy default_route_policy(HeuristicKind kind) {
  return kind == HeuristicKind::Spiral ? RoutePolicy::ModifiedDijkstra : RoutePolicy::XY;
}

std::vector<Coord> spiral_ring(const ArchGraph& arch, Coord center, int hop) {
  arch.require(center);
  if (hop < 1) throw InputError("spiral ring radius must be at least 1");
  std::vector<Coord> ring;
  ring.reserve(static_cast<std::size_t>(8 * hop));
  auto visit = [&](int x, int y) {
    if (arch.contains(Coord{x, y})) ring.push_back(Coord{x, y});
  };
  const int west = center.x - hop;
  const int east = center.x + hop;
  const int north = center.y - hop;
  const int south = center.y + hop;
  for (int y = center.y; y >= north; --y) visit(west, y);
  for (int x = west + 1; x <= east; ++x) visit(x, north);
  for (int y = north + 1; y <= south; ++y) visit(east, y);
  for (int x = east - 1; x >= west; --x) visit(x, south);
  for (int y = south - 1; y > center.y; --y) visit(west, y);
  return ring;
}

std::vector<Coord> manhattan_shell(const ArchGraph& arch, Coord center, int n) {
  arch.require(center);
  std::vector<Coord> shell;
  for (int y = std::max(0, center.y - n); y <= std::min(arch.height() - 1, center.y + n); ++y) {
    const int rest = n - std::abs(y - center.y);
    if (rest == 0) {
      shell.push_back(Coord{center.x, y});
      continue;
    }
    if (center.x - rest >= 0) shell.push_back(Coord{center.x - rest, y});
    if (center.x + rest < arch.width()) shell.push_back(Coord{center.x + rest, y});
  }
  return shell;
}

int max_spiral_hop(const ArchGraph& arch, Coord center) {
  return std::max({center.x, arch.width() - 1 - center.x, center.y, arch.height() - 1 - center.y});
}

int max_shell_distance(const ArchGraph& arch, Coord center) {
  return std::max(center.x, arch.width() - 1 - center.x) +
         std::max(center.y, arch.height() - 1 - center.y);
}

std::vector<Coord> free_compatible_tiles(const MappingState& state, TaskKind kind) {
  std::vector<Coord> out;
  const ArchGraph& arch = state.arch();
  for (std::size_t i = 0; i < arch.tile_count(); ++i) {
    const Coord c = arch.coord_of(i);
    if (compatible(kind, arch.kind(c)) && state.is_free(c)) out.push_back(c);
  }
  return out;
}

void commit_request_routes(ChannelLoadLedger& ledger, const ArchGraph& arch, RoutePolicy policy,
                           Coord requester, Coord candidate, std::uint64_t vms,
                           std::uint64_t vsm) {
  if (vms > 0) ledger.add_path(route(policy, arch, requester, candidate, ledger), vms);
  if (vsm > 0) ledger.add_path(route(policy, arch, candidate, requester, ledger), vsm);
}

namespace {

bool usable(const MappingState& state, const MapRequest& req, Coord c) {
  return compatible(req.kind, state.arch().kind(c)) && state.is_free(c);
}

void require_requester(const MapRequest& req) {
  if (!req.requester) throw StateError("mapping request has no requester tile");
}

/// Index of the best score; the fault hook reverses only the final tie-break.
std::size_t argmin(std::span<const kernels::CandidateScore> scores) {
  const bool flip = fault::flip_tiebreak();
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    const auto& a = scores[i];
    const auto& b = scores[best];
    if (std::tie(a.primary, a.secondary) != std::tie(b.primary, b.secondary)) {
      if (std::tie(a.primary, a.secondary) < std::tie(b.primary, b.secondary)) best = i;
    } else if (flip ? a.linear_index > b.linear_index : a.linear_index < b.linear_index) {
      best = i;
    }
  }
  return best;
}

MapOutcome choose(kernels::Objective objective, const MapRequest& req, const MappingState& state,
                  RoutePolicy policy, ExecPolicy exec, std::span<const Coord> candidates) {
  if (candidates.empty()) return MapOutcome{std::nullopt, 0};
  const auto scores =
      exec == ExecPolicy::Parallel
          ? kernels::score_candidates_parallel(objective, req, state, policy, candidates)
          : kernels::score_candidates_serial(objective, req, state, policy, candidates);
  return MapOutcome{candidates[argmin(scores)], candidates.size()};
}

}  // namespace

FirstFreeResult map_ff(const MapRequest& req, const MappingState& state, std::size_t cursor) {
  const ArchGraph& arch = state.arch();
  const std::size_t n = arch.tile_count();
  MapOutcome outcome;
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t index = (cursor + step) % n;
    ++outcome.evaluations;
    if (usable(state, req, arch.coord_of(index))) {
      outcome.tile = arch.coord_of(index);
      return FirstFreeResult{outcome, (index + 1) % n};
    }
  }
  return FirstFreeResult{outcome, cursor};
}

MapOutcome map_nn(const MapRequest& req, const MappingState& state) {
  require_requester(req);
  const Coord origin = *req.requester;
  MapOutcome outcome;
  for (int n = 1; n <= max_shell_distance(state.arch(), origin); ++n) {
    for (Coord c : manhattan_shell(state.arch(), origin, n)) {
      ++outcome.evaluations;
      if (usable(state, req, c)) {
        outcome.tile = c;
        return outcome;
      }
    }
  }
  return outcome;
}

MapOutcome map_mmc(const MapRequest& req, const MappingState& state, RoutePolicy policy,
                   ExecPolicy exec) {
  require_requester(req);
  const auto candidates = free_compatible_tiles(state, req.kind);
  return choose(kernels::Objective::PeakLoad, req, state, policy, exec, candidates);
}

MapOutcome map_mac(const MapRequest& req, const MappingState& state, RoutePolicy policy,
                   ExecPolicy exec) {
  require_requester(req);
  const auto candidates = free_compatible_tiles(state, req.kind);
  return choose(kernels::Objective::AverageLoad, req, state, policy, exec, candidates);
}

MapOutcome map_pl(const MapRequest& req, const MappingState& state, RoutePolicy policy,
                  ExecPolicy exec) {
  require_requester(req);
  const auto candidates = free_compatible_tiles(state, req.kind);
  return choose(kernels::Objective::PathLoad, req, state, policy, exec, candidates);
}

MapOutcome map_bn(const MapRequest& req, const MappingState& state, RoutePolicy policy,
                  ExecPolicy exec) {
  require_requester(req);
  const Coord origin = *req.requester;
  std::size_t inspected = 0;
  for (int n = 1; n <= max_shell_distance(state.arch(), origin); ++n) {
    std::vector<Coord> shell;
    for (Coord c : manhattan_shell(state.arch(), origin, n)) {
      ++inspected;
      if (usable(state, req, c)) shell.push_back(c);
    }
    if (shell.empty()) continue;
    // Score in linear index order so the tie-break matches map_pl.
    std::sort(shell.begin(), shell.end(), [&](Coord a, Coord b) {
      return state.arch().linear_index(a) < state.arch().linear_index(b);
    });
    MapOutcome outcome = choose(kernels::Objective::PathLoad, req, state, policy, exec, shell);
    outcome.evaluations = inspected;
    return outcome;
  }
  return MapOutcome{std::nullopt, inspected};
}

MapOutcome map_spiral(const MapRequest& req, const MappingState& state) {
  require_requester(req);
  const Coord origin = *req.requester;
  MapOutcome outcome;
  for (int hop = 1; hop <= max_spiral_hop(state.arch(), origin); ++hop) {
    for (Coord c : spiral_ring(state.arch(), origin, hop)) {
      ++outcome.evaluations;
      if (usable(state, req, c)) {
        outcome.tile = c;
        return outcome;
      }
    }
  }
  return outcome;
}

// --- clusters ---------------------------------------------------------------

namespace {

struct Band {
  int begin;
  int end;
};

std::vector<Band> split_bands(int extent) {
  std::vector<Band> bands;
  int begin = 0;
  for (int k = 1; k <= 3; ++k) {
    const int end = (k * extent + 2) / 3;
    if (end > begin) bands.push_back(Band{begin, end});
    begin = std::max(begin, end);
  }
  return bands;
}

}  // namespace

ClusterGrid::ClusterGrid(const ArchGraph& arch) {
  const auto columns = split_bands(arch.width());
  const auto rows = split_bands(arch.height());
  // Corners first, then the middle, then the edge midpoints.
  static constexpr int kOrder[][2] = {{0, 0}, {2, 2}, {0, 2}, {2, 0}, {1, 1},
                                      {0, 1}, {2, 1}, {1, 0}, {1, 2}};
  for (const auto& [bx, by] : kOrder) {
    if (bx >= static_cast<int>(columns.size()) || by >= static_cast<int>(rows.size())) continue;
    const Band& col = columns[static_cast<std::size_t>(bx)];
    const Band& row = rows[static_cast<std::size_t>(by)];
    clusters_.push_back(Cluster{col.begin, col.end, row.begin, row.end,
                                Coord{col.begin + (col.end - col.begin - 1) / 2,
                                      row.begin + (row.end - row.begin - 1) / 2}});
    order_.push_back(clusters_.size() - 1);
  }
  holder_.assign(clusters_.size(), std::nullopt);
}

std::optional<std::size_t> ClusterGrid::next_free() const {
  for (std::size_t c : order_) {
    if (!holder_[c]) return c;
  }
  return std::nullopt;
}

std::size_t ClusterGrid::held_count() const {
  return static_cast<std::size_t>(
      std::count_if(holder_.begin(), holder_.end(), [](const auto& h) { return h.has_value(); }));
}

void ClusterGrid::acquire(std::size_t cluster, int app) {
  if (holder_.at(cluster)) throw LogicError("cluster already held");
  holder_[cluster] = app;
}

void ClusterGrid::release(int app) {
  for (auto& h : holder_) {
    if (h == app) h.reset();
  }
}

InitialPlacement place_initial(ClusterGrid& grid, const MapRequest& req,
                               const MappingState& state) {
  InitialPlacement placement;
  const auto cluster = grid.next_free();
  if (!cluster) {
    placement.queued = true;
    return placement;
  }
  const Coord center = grid.clusters()[*cluster].center;
  ++placement.outcome.evaluations;
  if (usable(state, req, center)) {
    placement.outcome.tile = center;
  } else {
    MapRequest around = req;
    around.requester = center;
    const MapOutcome found = map_spiral(around, state);
    placement.outcome.tile = found.tile;
    placement.outcome.evaluations += found.evaluations;
  }
  if (placement.outcome.tile) {
    grid.acquire(*cluster, req.task.app);
    placement.cluster = cluster;
  }
  return placement;
}

// --- dispatcher -------------------------------------------------------------

Mapper::Mapper(HeuristicKind kind, RoutePolicy policy, const ArchGraph& arch, ExecPolicy exec,
               bool cluster_initial_for_all)
    : kind_(kind),
      policy_(policy),
      exec_(exec),
      use_clusters_(kind == HeuristicKind::Spiral || cluster_initial_for_all),
      clusters_(arch) {}

MapOutcome Mapper::map_task(const MapRequest& req, const MappingState& state) {
  switch (kind_) {
    case HeuristicKind::FF: {
      const FirstFreeResult r = map_ff(req, state, ff_cursor_);
      ff_cursor_ = r.cursor;
      return r.outcome;
    }
    case HeuristicKind::MMC: return map_mmc(req, state, policy_, exec_);
    case HeuristicKind::MAC: return map_mac(req, state, policy_, exec_);
    case HeuristicKind::NN: return map_nn(req, state);
    case HeuristicKind::PL: return map_pl(req, state, policy_, exec_);
    case HeuristicKind::BN: return map_bn(req, state, policy_, exec_);
    case HeuristicKind::Spiral: return map_spiral(req, state);
  }
  return {};
}

InitialPlacement Mapper::map_initial(const MapRequest& req, const MappingState& state) {
  if (use_clusters_) return place_initial(clusters_, req, state);
  MapRequest from_manager = req;
  from_manager.requester = state.arch().manager();
  InitialPlacement placement;
  placement.outcome = map_task(from_manager, state);
  return placement;
}

}  // namespace nocmap
