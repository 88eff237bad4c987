#include "nocmap/routing.hpp"

#include <functional>
#include <limits>
#include <queue>
#include <tuple>

#include "nocmap/errors.hpp"

namespace nocmap {

std::string_view to_string(RoutePolicy policy) {
  return policy == RoutePolicy::XY ? "xy" : "mdijkstra";
}

std::optional<RoutePolicy> parse_route_policy(std::string_view text) {
  if (text == "xy") return RoutePolicy::XY;
  if (text == "mdijkstra") return RoutePolicy::ModifiedDijkstra;
  return std::nullopt;
}

Path xy_route(const ArchGraph& arch, Coord src, Coord dst) {
  arch.require(src);
  arch.require(dst);
  Path path{src};
  Coord cur = src;
  while (cur.x != dst.x) {
    cur.x += dst.x > cur.x ? 1 : -1;
    path.push_back(cur);
  }
  while (cur.y != dst.y) {
    cur.y += dst.y > cur.y ? 1 : -1;
    path.push_back(cur);
  }
  return path;
}

Path modified_dijkstra(const ArchGraph& arch, Coord src, Coord dst,
                       const ChannelLoadLedger& ledger) {
  arch.require(src);
  arch.require(dst);
  if (src == dst) return Path{src};

  // Distances to dst over reversed links, then a forward walk that always takes
  // the smallest-index neighbour still on an optimal path.
  constexpr PathObjective kUnreached{std::numeric_limits<std::uint64_t>::max(),
                                     std::numeric_limits<std::size_t>::max()};
  std::vector<PathObjective> dist(arch.tile_count(), kUnreached);
  using Entry = std::tuple<std::uint64_t, std::size_t, std::size_t>;  // load, hops, tile
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;

  const std::size_t target = arch.linear_index(dst);
  dist[target] = {0, 0};
  frontier.emplace(0, 0, target);
  while (!frontier.empty()) {
    const auto [load, hops, index] = frontier.top();
    frontier.pop();
    if (PathObjective{load, hops} != dist[index]) continue;
    const Coord here = arch.coord_of(index);
    for (Coord prev : arch.neighbors(here)) {
      const PathObjective candidate{load + ledger.load(prev, here), hops + 1};
      const std::size_t p = arch.linear_index(prev);
      if (candidate < dist[p]) {
        dist[p] = candidate;
        frontier.emplace(candidate.load, candidate.hops, p);
      }
    }
  }

  Path path{src};
  Coord cur = src;
  while (cur != dst) {
    const PathObjective here = dist[arch.linear_index(cur)];
    for (Coord next : arch.neighbors(cur)) {
      const PathObjective via = dist[arch.linear_index(next)];
      if (via == kUnreached) continue;
      if (PathObjective{via.load + ledger.load(cur, next), via.hops + 1} == here) {
        cur = next;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

std::uint64_t path_cost(std::span<const Coord> path, const ChannelLoadLedger& ledger) {
  std::uint64_t cost = 0;
  for (std::size_t i = 1; i < path.size(); ++i) cost += ledger.load(path[i - 1], path[i]);
  return cost;
}

PathObjective objective(std::span<const Coord> path, const ChannelLoadLedger& ledger) {
  return PathObjective{path_cost(path, ledger), path.empty() ? 0 : path.size() - 1};
}

namespace {

struct OracleSearch {
  const ArchGraph& arch;
  const ChannelLoadLedger& ledger;
  Coord dst;
  std::vector<bool> on_path;
  Path current;
  std::vector<std::size_t> current_ids;
  std::optional<PathObjective> best_objective;
  std::vector<std::size_t> best_ids;
  Path best;

  void visit(Coord here, std::uint64_t load) {
    if (here == dst) {
      const PathObjective obj{load, current.size() - 1};
      if (!best_objective || obj < *best_objective ||
          (obj == *best_objective && current_ids < best_ids)) {
        best_objective = obj;
        best_ids = current_ids;
        best = current;
      }
      return;
    }
    // Plain 4-way expansion; ordering here does not matter since every simple path is scored.
    const Coord steps[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (Coord step : steps) {
      const Coord next{here.x + step.x, here.y + step.y};
      if (!arch.contains(next)) continue;
      const std::size_t id = arch.linear_index(next);
      if (on_path[id]) continue;
      on_path[id] = true;
      current.push_back(next);
      current_ids.push_back(id);
      visit(next, load + ledger.load(here, next));
      current.pop_back();
      current_ids.pop_back();
      on_path[id] = false;
    }
  }
};

}  // namespace

Path route_oracle(const ArchGraph& arch, Coord src, Coord dst, const ChannelLoadLedger& ledger) {
  if (arch.tile_count() > kRouteOracleMaxTiles) {
    throw InputError("route oracle refuses meshes larger than 4x4");
  }
  arch.require(src);
  arch.require(dst);
  OracleSearch search{arch, ledger, dst, std::vector<bool>(arch.tile_count(), false), {src},
                      {arch.linear_index(src)}, std::nullopt, {}, {}};
  search.on_path[arch.linear_index(src)] = true;
  search.visit(src, 0);
  return search.best;
}

Path route(RoutePolicy policy, const ArchGraph& arch, Coord src, Coord dst,
           const ChannelLoadLedger& ledger) {
  return policy == RoutePolicy::XY ? xy_route(arch, src, dst)
                                   : modified_dijkstra(arch, src, dst, ledger);
}

}  // namespace nocmap
