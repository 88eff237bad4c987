#include "nocmap/arch.hpp"

#include <algorithm>
#include <string>

#include "nocmap/errors.hpp"

namespace nocmap {

namespace {

std::string describe(Coord c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

}  // namespace

std::string_view to_string(TileKind kind) {
  switch (kind) {
    case TileKind::ISP: return "isp";
    case TileKind::RA: return "ra";
    case TileKind::Manager: return "manager";
  }
  return "?";
}

bool compatible(TaskKind task_kind, TileKind tile_kind) {
  switch (tile_kind) {
    case TileKind::ISP: return task_kind == TaskKind::Software || task_kind == TaskKind::Initial;
    case TileKind::RA: return task_kind == TaskKind::Hardware;
    case TileKind::Manager: return false;
  }
  return false;
}

ArchGraph::ArchGraph(int width, int height, std::vector<TileKind> kinds)
    : width_(width), height_(height), kinds_(std::move(kinds)) {
  if (width < 1 || height < 1) throw InputError("mesh dimensions must be positive");
  if (kinds_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InputError("tile kind list does not match mesh size");
  }
  if (std::count(kinds_.begin(), kinds_.end(), TileKind::Manager) != 1) {
    throw InputError("platform must contain exactly one manager tile");
  }
  const auto it = std::find(kinds_.begin(), kinds_.end(), TileKind::Manager);
  manager_ = coord_of(static_cast<std::size_t>(it - kinds_.begin()));
}

const std::vector<Coord>& ArchGraph::default_ra_coords() {
  static const std::vector<Coord> ra = {{2, 1}, {5, 1}, {1, 2}, {4, 2}, {7, 2}, {3, 3}, {6, 3},
                                        {1, 4}, {4, 4}, {7, 4}, {2, 5}, {5, 5}, {3, 6}, {6, 6}};
  return ra;
}

ArchGraph ArchGraph::with_default_layout(int width, int height) {
  if (width < 1 || height < 1) throw InputError("mesh dimensions must be positive");
  std::vector<TileKind> kinds(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                              TileKind::ISP);
  kinds[0] = TileKind::Manager;
  for (Coord c : default_ra_coords()) {
    if (c.x < width && c.y < height) {
      kinds[static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width) +
            static_cast<std::size_t>(c.x)] = TileKind::RA;
    }
  }
  return ArchGraph(width, height, std::move(kinds));
}

ArchGraph ArchGraph::default_platform() { return with_default_layout(8, 8); }

std::size_t ArchGraph::link_count() const {
  const auto w = static_cast<std::size_t>(width_);
  const auto h = static_cast<std::size_t>(height_);
  return 2 * (w * (h - 1) + h * (w - 1));
}

void ArchGraph::require(Coord c) const {
  if (!contains(c)) throw InputError("coordinate " + describe(c) + " outside the mesh");
}

std::vector<Tile> ArchGraph::tiles() const {
  std::vector<Tile> out;
  out.reserve(kinds_.size());
  for (std::size_t i = 0; i < kinds_.size(); ++i) out.push_back(Tile{coord_of(i), kinds_[i], i});
  return out;
}

std::size_t ArchGraph::count(TileKind kind) const {
  return static_cast<std::size_t>(std::count(kinds_.begin(), kinds_.end(), kind));
}

std::size_t ArchGraph::link_slot(Coord from, Coord to) const {
  if (!contains(from) || !contains(to) || manhattan(from, to) != 1) {
    throw LogicError("no link " + describe(from) + "->" + describe(to));
  }
  Port port = Port::East;
  if (to.x == from.x + 1) port = Port::East;
  else if (to.x == from.x - 1) port = Port::West;
  else if (to.y == from.y - 1) port = Port::North;
  else port = Port::South;
  return linear_index(from) * kPortsPerTile + static_cast<std::size_t>(port);
}

std::vector<Coord> ArchGraph::neighbors(Coord c) const {
  std::vector<Coord> out;
  out.reserve(4);
  // Increasing linear index: north, west, east, south.
  const Coord candidates[] = {{c.x, c.y - 1}, {c.x - 1, c.y}, {c.x + 1, c.y}, {c.x, c.y + 1}};
  for (Coord n : candidates) {
    if (contains(n)) out.push_back(n);
  }
  return out;
}

int hop_distance(const ArchGraph& arch, Coord a, Coord b) {
  arch.require(a);
  arch.require(b);
  return manhattan(a, b);
}

}  // namespace nocmap
