#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "nocmap/arch.hpp"

namespace nocmap {

/// Ordered list of 4-adjacent tiles from source to destination.
using Path = std::vector<Coord>;

/// Accumulated volume (packets) per directed link.
class ChannelLoadLedger {
 public:
  explicit ChannelLoadLedger(const ArchGraph& arch);

  [[nodiscard]] std::uint64_t load(Coord from, Coord to) const;
  [[nodiscard]] std::uint64_t load_at(std::size_t slot) const { return loads_[slot]; }

  void add(Coord from, Coord to, std::uint64_t volume);
  /// Throws LogicError if the link holds less than `volume`.
  void remove(Coord from, Coord to, std::uint64_t volume);
  void add_path(std::span<const Coord> path, std::uint64_t volume);
  void remove_path(std::span<const Coord> path, std::uint64_t volume);

  [[nodiscard]] std::uint64_t peak() const;
  [[nodiscard]] std::uint64_t total() const { return total_; }
  /// Arithmetic mean over every directed link of the mesh.
  [[nodiscard]] double average() const;
  [[nodiscard]] std::size_t link_count() const { return link_count_; }
  [[nodiscard]] bool all_zero() const { return total_ == 0; }
  [[nodiscard]] std::span<const std::uint64_t> slots() const { return loads_; }

  friend bool operator==(const ChannelLoadLedger& a, const ChannelLoadLedger& b) {
    return a.loads_ == b.loads_;
  }

 private:
  [[nodiscard]] std::size_t slot(Coord from, Coord to) const;

  int width_;
  int height_;
  std::size_t link_count_;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> loads_;
};

/// Application-scoped task handle. `app` is the scenario position of the application.
struct TaskRef {
  int app = 0;
  int task = 0;
  friend auto operator<=>(const TaskRef&, const TaskRef&) = default;
};

enum class Direction { MasterToSlave = 0, SlaveToMaster = 1 };

/// One direction of one edge. The ordering is the simulator's tie-break order.
struct CommKey {
  int app = 0;
  int master = 0;
  int slave = 0;
  Direction direction = Direction::MasterToSlave;
  friend auto operator<=>(const CommKey&, const CommKey&) = default;

  [[nodiscard]] TaskRef source() const {
    return direction == Direction::MasterToSlave ? TaskRef{app, master} : TaskRef{app, slave};
  }
  [[nodiscard]] TaskRef destination() const {
    return direction == Direction::MasterToSlave ? TaskRef{app, slave} : TaskRef{app, master};
  }
};

struct Route {
  Path path;
  std::uint64_t volume = 0;
};

/// Placement of tasks on tiles plus the pinned routes and the ledger they induce.
class MappingState {
 public:
  explicit MappingState(ArchGraph arch);

  [[nodiscard]] const ArchGraph& arch() const { return arch_; }
  [[nodiscard]] const ChannelLoadLedger& ledger() const { return ledger_; }
  [[nodiscard]] const std::map<CommKey, Route>& routes() const { return routes_; }
  [[nodiscard]] const std::map<TaskRef, Coord>& placements() const { return placement_; }

  [[nodiscard]] bool is_free(Coord c) const;
  [[nodiscard]] std::optional<TaskRef> occupant(Coord c) const;
  [[nodiscard]] std::optional<Coord> tile_of(TaskRef task) const;
  [[nodiscard]] std::size_t occupied_count() const { return placement_.size(); }

  /// Throws LogicError on an occupied tile, an incompatible kind, or an already placed task.
  void place(TaskRef task, TaskKind kind, Coord tile);
  /// Frees the task's tile. Throws StateError if it is not placed or still has routes.
  void unplace(TaskRef task);

  /// Pins `path` for `comm` and adds `volume` to each directed link along it.
  void apply_route(const CommKey& comm, Path path, std::uint64_t volume);
  /// Removes a single pinned route and its load. Throws StateError if absent.
  void release_route(const CommKey& comm);
  /// Removes every placement and route of `app`. Throws InputError if nothing belongs to it.
  void release_app(int app);

  /// Ledger recomputed from the stored routes alone.
  [[nodiscard]] ChannelLoadLedger rebuild_ledger() const;

 private:
  ArchGraph arch_;
  ChannelLoadLedger ledger_;
  std::vector<std::optional<TaskRef>> occupancy_;
  std::map<TaskRef, Coord> placement_;
  std::map<CommKey, Route> routes_;
};

/// True iff `path` is non-empty, simple, in-mesh and 4-connected.
[[nodiscard]] bool is_valid_path(const ArchGraph& arch, std::span<const Coord> path);

}  // namespace nocmap
