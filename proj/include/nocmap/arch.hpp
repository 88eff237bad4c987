#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "nocmap/task_graph.hpp"

namespace nocmap {

/// Mesh position; x is the column, y the row (row 0 is the north edge).
struct Coord {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Coord&, const Coord&) = default;
};

enum class TileKind { ISP, RA, Manager };

[[nodiscard]] std::string_view to_string(TileKind kind);

/// Software and Initial tasks run on ISPs, Hardware tasks on RAs. The manager runs nothing.
[[nodiscard]] bool compatible(TaskKind task_kind, TileKind tile_kind);

struct Tile {
  Coord coord;
  TileKind kind = TileKind::ISP;
  std::size_t linear_index = 0;
};

/// Compass port of a tile. The numeric value is the link slot offset.
enum class Port : std::size_t { East = 0, West = 1, North = 2, South = 3 };
inline constexpr std::size_t kPortsPerTile = 4;

/// W x H mesh of heterogeneous tiles with two directed links per 4-adjacency.
class ArchGraph {
 public:
  /// `kinds` is row-major (index y * width + x). Exactly one Manager tile is required.
  ArchGraph(int width, int height, std::vector<TileKind> kinds);

  /// 8x8 platform: manager at (0,0), 14 RA tiles spread in a checkerboard pattern, 49 ISPs.
  static ArchGraph default_platform();
  /// Any mesh size: manager at (0,0), RA tiles taken from the 8x8 default list where they fit.
  static ArchGraph with_default_layout(int width, int height);
  [[nodiscard]] static const std::vector<Coord>& default_ra_coords();

  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] int height() const { return height_; }
  [[nodiscard]] std::size_t tile_count() const { return kinds_.size(); }
  [[nodiscard]] std::size_t link_count() const;
  [[nodiscard]] std::size_t link_slot_count() const { return kinds_.size() * kPortsPerTile; }

  [[nodiscard]] bool contains(Coord c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  /// Throws InputError for coordinates outside the mesh.
  void require(Coord c) const;

  [[nodiscard]] std::size_t linear_index(Coord c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }
  [[nodiscard]] Coord coord_of(std::size_t index) const {
    return Coord{static_cast<int>(index % static_cast<std::size_t>(width_)),
                 static_cast<int>(index / static_cast<std::size_t>(width_))};
  }
  [[nodiscard]] TileKind kind(Coord c) const { return kinds_[linear_index(c)]; }
  [[nodiscard]] const std::vector<TileKind>& kinds() const { return kinds_; }
  [[nodiscard]] Tile tile(Coord c) const { return Tile{c, kind(c), linear_index(c)}; }
  [[nodiscard]] std::vector<Tile> tiles() const;
  [[nodiscard]] Coord manager() const { return manager_; }
  [[nodiscard]] std::size_t count(TileKind kind) const;

  /// Slot of the directed link from -> to. Throws LogicError unless 4-adjacent.
  [[nodiscard]] std::size_t link_slot(Coord from, Coord to) const;
  /// In-mesh 4-neighbours of c in increasing linear index order.
  [[nodiscard]] std::vector<Coord> neighbors(Coord c) const;

  friend bool operator==(const ArchGraph&, const ArchGraph&) = default;

 private:
  int width_;
  int height_;
  std::vector<TileKind> kinds_;
  Coord manager_;
};

/// Manhattan distance. Throws InputError if either coordinate is outside the mesh.
[[nodiscard]] int hop_distance(const ArchGraph& arch, Coord a, Coord b);

[[nodiscard]] inline int manhattan(Coord a, Coord b) {
  return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y);
}

}  // namespace nocmap
