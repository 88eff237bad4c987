#include "nocmap/task_graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "nocmap/errors.hpp"

namespace nocmap {

const char* to_string(ValidationReason reason) {
  switch (reason) {
    case ValidationReason::CyclicGraph: return "cyclic graph";
    case ValidationReason::MultipleRoots: return "multiple roots";
    case ValidationReason::NoRoot: return "no initial task";
    case ValidationReason::UnknownTask: return "unknown task";
    case ValidationReason::DuplicateTask: return "duplicate task";
    case ValidationReason::DuplicateEdge: return "duplicate edge";
    case ValidationReason::SelfEdge: return "self edge";
    case ValidationReason::BadVolume: return "bad volume";
    case ValidationReason::BadInstructions: return "bad instruction count";
    case ValidationReason::BadKind: return "bad task kind";
  }
  return "invalid";
}

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::Initial: return "initial";
    case TaskKind::Software: return "software";
    case TaskKind::Hardware: return "hardware";
  }
  return "?";
}

std::optional<TaskKind> parse_task_kind(std::string_view text) {
  if (text == "initial") return TaskKind::Initial;
  if (text == "software") return TaskKind::Software;
  if (text == "hardware") return TaskKind::Hardware;
  return std::nullopt;
}

std::size_t TaskGraph::add_task(std::string id, TaskKind kind, std::uint64_t instructions) {
  if (by_id_.contains(id)) {
    throw ValidationError(ValidationReason::DuplicateTask, app_id_ + "/" + id);
  }
  const std::size_t index = tasks_.size();
  by_id_.emplace(id, index);
  tasks_.push_back(Task{std::move(id), kind, instructions});
  out_.emplace_back();
  in_.emplace_back();
  return index;
}

std::size_t TaskGraph::add_edge(std::string_view master, std::string_view slave,
                                std::uint64_t vms, std::uint64_t vsm) {
  const auto m = find_task(master);
  const auto s = find_task(slave);
  if (!m || !s) {
    throw ValidationError(ValidationReason::UnknownTask,
                          app_id_ + "/" + std::string(!m ? master : slave));
  }
  const std::size_t index = edges_.size();
  edges_.push_back(Edge{*m, *s, vms, vsm});
  out_[*m].push_back(index);
  in_[*s].push_back(index);
  return index;
}

std::optional<std::size_t> TaskGraph::find_task(std::string_view id) const {
  const auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::size_t TaskGraph::root() const {
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    if (tasks_[i].kind == TaskKind::Initial) return i;
  }
  throw ValidationError(ValidationReason::NoRoot, app_id_);
}

void TaskGraph::validate() const {
  const std::string& app = app_id_;
  std::size_t initial_count = 0;
  for (const auto& t : tasks_) {
    if (t.instructions < 1) throw ValidationError(ValidationReason::BadInstructions, app + "/" + t.id);
    if (t.kind == TaskKind::Initial) ++initial_count;
  }
  if (initial_count == 0) throw ValidationError(ValidationReason::NoRoot, app);
  if (initial_count > 1) throw ValidationError(ValidationReason::MultipleRoots, app);

  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges_) {
    const std::string label = app + "/" + tasks_[e.master].id + "->" + tasks_[e.slave].id;
    if (e.master == e.slave) throw ValidationError(ValidationReason::SelfEdge, label);
    if (e.vms + e.vsm < 1) throw ValidationError(ValidationReason::BadVolume, label);
    if (!seen.emplace(e.master, e.slave).second) {
      throw ValidationError(ValidationReason::DuplicateEdge, label);
    }
  }

  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    const bool is_initial = tasks_[i].kind == TaskKind::Initial;
    if (is_initial && !in_[i].empty()) {
      throw ValidationError(ValidationReason::CyclicGraph,
                            app + "/" + tasks_[i].id + " is initial but has a master");
    }
    if (!is_initial && in_[i].empty()) {
      throw ValidationError(ValidationReason::MultipleRoots,
                            app + "/" + tasks_[i].id + " has no master");
    }
  }

  // Kahn's algorithm; whatever is left over sits on or behind a cycle.
  std::vector<std::size_t> indegree(tasks_.size());
  for (std::size_t i = 0; i < tasks_.size(); ++i) indegree[i] = in_[i].size();
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const std::size_t t = ready.back();
    ready.pop_back();
    ++visited;
    for (std::size_t e : out_[t]) {
      if (--indegree[edges_[e].slave] == 0) ready.push_back(edges_[e].slave);
    }
  }
  if (visited != tasks_.size()) {
    std::ostringstream detail;
    detail << app << " edges";
    for (const auto& e : edges_) {
      if (indegree[e.master] > 0 && indegree[e.slave] > 0) {
        detail << ' ' << tasks_[e.master].id << "->" << tasks_[e.slave].id;
      }
    }
    throw ValidationError(ValidationReason::CyclicGraph, detail.str());
  }
}

bool operator==(const Task& a, const Task& b) {
  return a.id == b.id && a.kind == b.kind && a.instructions == b.instructions;
}

bool operator==(const Edge& a, const Edge& b) {
  return a.master == b.master && a.slave == b.slave && a.vms == b.vms && a.vsm == b.vsm;
}

bool operator==(const TaskGraph& a, const TaskGraph& b) {
  return a.app_id_ == b.app_id_ && a.tasks_ == b.tasks_ && a.edges_ == b.edges_;
}

}  // namespace nocmap
