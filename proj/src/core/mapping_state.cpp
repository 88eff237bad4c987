#include "nocmap/mapping_state.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "nocmap/errors.hpp"

namespace nocmap {

ChannelLoadLedger::ChannelLoadLedger(const ArchGraph& arch)
    : width_(arch.width()),
      height_(arch.height()),
      link_count_(arch.link_count()),
      loads_(arch.link_slot_count(), 0) {}

std::size_t ChannelLoadLedger::slot(Coord from, Coord to) const {
  const bool inside = from.x >= 0 && from.y >= 0 && from.x < width_ && from.y < height_ &&
                      to.x >= 0 && to.y >= 0 && to.x < width_ && to.y < height_;
  if (!inside || manhattan(from, to) != 1) throw LogicError("ledger: not a mesh link");
  std::size_t port = 0;
  if (to.x == from.x + 1) port = 0;
  else if (to.x == from.x - 1) port = 1;
  else if (to.y == from.y - 1) port = 2;
  else port = 3;
  return (static_cast<std::size_t>(from.y) * static_cast<std::size_t>(width_) +
          static_cast<std::size_t>(from.x)) * kPortsPerTile + port;
}

std::uint64_t ChannelLoadLedger::load(Coord from, Coord to) const {
  return loads_[slot(from, to)];
}

void ChannelLoadLedger::add(Coord from, Coord to, std::uint64_t volume) {
  loads_[slot(from, to)] += volume;
  total_ += volume;
}

void ChannelLoadLedger::remove(Coord from, Coord to, std::uint64_t volume) {
  auto& value = loads_[slot(from, to)];
  if (value < volume) throw LogicError("ledger: release would drive a link load negative");
  value -= volume;
  total_ -= volume;
}

void ChannelLoadLedger::add_path(std::span<const Coord> path, std::uint64_t volume) {
  for (std::size_t i = 1; i < path.size(); ++i) add(path[i - 1], path[i], volume);
}

void ChannelLoadLedger::remove_path(std::span<const Coord> path, std::uint64_t volume) {
  // Check first so a failure leaves the ledger untouched.
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (loads_[slot(path[i - 1], path[i])] < volume) {
      throw LogicError("ledger: release would drive a link load negative");
    }
  }
  for (std::size_t i = 1; i < path.size(); ++i) remove(path[i - 1], path[i], volume);
}

std::uint64_t ChannelLoadLedger::peak() const {
  return loads_.empty() ? 0 : *std::max_element(loads_.begin(), loads_.end());
}

double ChannelLoadLedger::average() const {
  return link_count_ == 0 ? 0.0
                          : static_cast<double>(total_) / static_cast<double>(link_count_);
}

bool is_valid_path(const ArchGraph& arch, std::span<const Coord> path) {
  if (path.empty()) return false;
  std::set<Coord> seen;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (!arch.contains(path[i]) || !seen.insert(path[i]).second) return false;
    if (i > 0 && manhattan(path[i - 1], path[i]) != 1) return false;
  }
  return true;
}

MappingState::MappingState(ArchGraph arch)
    : arch_(std::move(arch)), ledger_(arch_), occupancy_(arch_.tile_count()) {}

bool MappingState::is_free(Coord c) const {
  return !occupancy_[arch_.linear_index(c)].has_value();
}

std::optional<TaskRef> MappingState::occupant(Coord c) const {
  return occupancy_[arch_.linear_index(c)];
}

std::optional<Coord> MappingState::tile_of(TaskRef task) const {
  const auto it = placement_.find(task);
  if (it == placement_.end()) return std::nullopt;
  return it->second;
}

void MappingState::place(TaskRef task, TaskKind kind, Coord tile) {
  arch_.require(tile);
  if (placement_.contains(task)) throw LogicError("task already placed");
  if (!is_free(tile)) throw LogicError("tile already occupied");
  if (!compatible(kind, arch_.kind(tile))) throw LogicError("task kind incompatible with tile");
  occupancy_[arch_.linear_index(tile)] = task;
  placement_.emplace(task, tile);
}

void MappingState::unplace(TaskRef task) {
  const auto it = placement_.find(task);
  if (it == placement_.end()) throw StateError("task is not placed");
  for (const auto& [key, route] : routes_) {
    if (key.app == task.app && (key.master == task.task || key.slave == task.task)) {
      throw StateError("task still has pinned routes");
    }
  }
  occupancy_[arch_.linear_index(it->second)].reset();
  placement_.erase(it);
}

void MappingState::apply_route(const CommKey& comm, Path path, std::uint64_t volume) {
  const auto src = tile_of(comm.source());
  const auto dst = tile_of(comm.destination());
  if (!src || !dst) throw StateError("route endpoint is not mapped");
  if (routes_.contains(comm)) throw LogicError("route already stored for this communication");
  if (!is_valid_path(arch_, path) || path.front() != *src || path.back() != *dst) {
    throw LogicError("route path does not connect the mapped endpoints");
  }
  ledger_.add_path(path, volume);
  routes_.emplace(comm, Route{std::move(path), volume});
}

void MappingState::release_route(const CommKey& comm) {
  const auto it = routes_.find(comm);
  if (it == routes_.end()) throw StateError("no route stored for this communication");
  ledger_.remove_path(it->second.path, it->second.volume);
  routes_.erase(it);
}

void MappingState::release_app(int app) {
  bool found = false;
  for (auto it = routes_.begin(); it != routes_.end();) {
    if (it->first.app == app) {
      ledger_.remove_path(it->second.path, it->second.volume);
      it = routes_.erase(it);
      found = true;
    } else {
      ++it;
    }
  }
  for (auto it = placement_.begin(); it != placement_.end();) {
    if (it->first.app == app) {
      occupancy_[arch_.linear_index(it->second)].reset();
      it = placement_.erase(it);
      found = true;
    } else {
      ++it;
    }
  }
  if (!found) throw InputError("unknown application " + std::to_string(app));
}

ChannelLoadLedger MappingState::rebuild_ledger() const {
  ChannelLoadLedger fresh(arch_);
  for (const auto& [key, route] : routes_) fresh.add_path(route.path, route.volume);
  return fresh;
}

}  // namespace nocmap
