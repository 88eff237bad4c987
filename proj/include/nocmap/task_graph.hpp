#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nocmap {

enum class TaskKind { Initial, Software, Hardware };

[[nodiscard]] std::string_view to_string(TaskKind kind);
/// Accepts the lowercase workload spelling ("initial", "software", "hardware").
[[nodiscard]] std::optional<TaskKind> parse_task_kind(std::string_view text);

struct Task {
  std::string id;
  TaskKind kind = TaskKind::Software;
  std::uint64_t instructions = 1;
};

/// Master/slave pair. Endpoints are indices into TaskGraph::tasks().
struct Edge {
  std::size_t master = 0;
  std::size_t slave = 0;
  std::uint64_t vms = 0;  // packets master -> slave
  std::uint64_t vsm = 0;  // packets slave -> master
};

/// Application graph. Construction only checks identifier references;
/// validate() enforces the full structural contract (single initial root,
/// acyclic, positive traffic and instruction counts).
class TaskGraph {
 public:
  TaskGraph() = default;
  explicit TaskGraph(std::string app_id) : app_id_(std::move(app_id)) {}

  std::size_t add_task(std::string id, TaskKind kind, std::uint64_t instructions);
  std::size_t add_edge(std::string_view master, std::string_view slave, std::uint64_t vms,
                       std::uint64_t vsm);

  void validate() const;

  [[nodiscard]] const std::string& app_id() const { return app_id_; }
  [[nodiscard]] const std::vector<Task>& tasks() const { return tasks_; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] const Task& task(std::size_t index) const { return tasks_.at(index); }
  [[nodiscard]] std::optional<std::size_t> find_task(std::string_view id) const;

  /// Edge indices whose master is `task`, in insertion order.
  [[nodiscard]] const std::vector<std::size_t>& out_edges(std::size_t task) const {
    return out_.at(task);
  }
  [[nodiscard]] const std::vector<std::size_t>& in_edges(std::size_t task) const {
    return in_.at(task);
  }

  /// Index of the Initial task. Only meaningful on a validated graph.
  [[nodiscard]] std::size_t root() const;

  friend bool operator==(const TaskGraph& a, const TaskGraph& b);

 private:
  std::string app_id_;
  std::vector<Task> tasks_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

bool operator==(const Task& a, const Task& b);
bool operator==(const Edge& a, const Edge& b);

}  // namespace nocmap
