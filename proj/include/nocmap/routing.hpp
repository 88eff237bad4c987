#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>

#include "nocmap/mapping_state.hpp"

namespace nocmap {

enum class RoutePolicy { XY, ModifiedDijkstra };

[[nodiscard]] std::string_view to_string(RoutePolicy policy);
/// "xy" or "mdijkstra".
[[nodiscard]] std::optional<RoutePolicy> parse_route_policy(std::string_view text);

/// Lexicographic routing objective: total ledger load along the path, then hop count.
struct PathObjective {
  std::uint64_t load = 0;
  std::size_t hops = 0;
  friend auto operator<=>(const PathObjective&, const PathObjective&) = default;
};

/// Dimension-ordered route: all of X first, then all of Y.
[[nodiscard]] Path xy_route(const ArchGraph& arch, Coord src, Coord dst);

/// Min-load route. Minimises (total load, hops); remaining ties go to the path whose
/// tile sequence is lexicographically smallest by linear index.
[[nodiscard]] Path modified_dijkstra(const ArchGraph& arch, Coord src, Coord dst,
                                     const ChannelLoadLedger& ledger);

/// Sum of current loads over the directed links the path traverses.
[[nodiscard]] std::uint64_t path_cost(std::span<const Coord> path, const ChannelLoadLedger& ledger);

[[nodiscard]] PathObjective objective(std::span<const Coord> path, const ChannelLoadLedger& ledger);

inline constexpr std::size_t kRouteOracleMaxTiles = 16;

/// Exhaustive enumeration of simple paths under the same objective and tie-break as
/// modified_dijkstra. Refuses meshes larger than 16 tiles with InputError.
[[nodiscard]] Path route_oracle(const ArchGraph& arch, Coord src, Coord dst,
                                const ChannelLoadLedger& ledger);

[[nodiscard]] Path route(RoutePolicy policy, const ArchGraph& arch, Coord src, Coord dst,
                         const ChannelLoadLedger& ledger);

}  // namespace nocmap
