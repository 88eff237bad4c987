#include "nocmap/simulator.hpp"

#include <algorithm>
#include <deque>
#include <exception>
#include <queue>
#include <set>
#include <tuple>

#include "nocmap/errors.hpp"

namespace nocmap {

std::uint64_t PlatformParams::cycles_per_instruction(TileKind kind) const {
  if (kind == TileKind::ISP) return isp_cycles_per_instruction;
  if (kind == TileKind::RA) return ra_cycles_per_instruction;
  throw LogicError("manager tile executes no tasks");
}

std::uint64_t PlatformParams::energy_per_instruction(TileKind kind) const {
  if (kind == TileKind::ISP) return isp_energy_per_instruction;
  if (kind == TileKind::RA) return ra_energy_per_instruction;
  throw LogicError("manager tile executes no tasks");
}

std::uint64_t compute_time(const Task& task, TileKind tile_kind, const PlatformParams& params) {
  if (!compatible(task.kind, tile_kind)) throw LogicError("task kind incompatible with tile");
  return task.instructions * params.cycles_per_instruction(tile_kind);
}

std::uint64_t compute_energy(const Task& task, TileKind tile_kind, const PlatformParams& params) {
  if (!compatible(task.kind, tile_kind)) throw LogicError("task kind incompatible with tile");
  return task.instructions * params.energy_per_instruction(tile_kind);
}

std::uint64_t comm_latency(std::uint64_t volume, std::uint64_t hops,
                           std::uint64_t congestion_delay) {
  if (volume == 0) return congestion_delay;
  if (hops == 0) throw LogicError("same-tile communication under mono-task mapping");
  return congestion_delay + hops + volume - 1;
}

std::uint64_t SimReport::max_queue_wait() const {
  std::uint64_t worst = 0;
  for (const auto& a : apps) worst = std::max(worst, a.queue_wait());
  return worst;
}

namespace {

constexpr std::string_view kEventNames[] = {"app_arrive",   "app_admit",   "task_map",
                                            "map_defer",    "compute_start", "compute_end",
                                            "comm_start",   "comm_end",    "task_done",
                                            "app_done"};

}  // namespace

std::string_view to_string(EventKind kind) { return kEventNames[static_cast<std::size_t>(kind)]; }

std::optional<EventKind> parse_event_kind(std::string_view text) {
  for (std::size_t i = 0; i < std::size(kEventNames); ++i) {
    if (kEventNames[i] == text) return static_cast<EventKind>(i);
  }
  return std::nullopt;
}

Scenario make_scenario(std::vector<TaskGraph> apps, HeuristicKind heuristic, std::uint64_t seed,
                       ArchGraph arch) {
  Scenario s;
  s.arch = std::move(arch);
  s.apps = std::move(apps);
  s.heuristic = heuristic;
  s.route_policy = default_route_policy(heuristic);
  s.seed = seed;
  s.max_concurrent_apps = kDefaultConcurrentApps;
  return s;
}

namespace {

struct TaskRt {
  bool mapped = false;
  bool started = false;
  bool computed = false;
  bool done = false;
  std::size_t waiting_inbound = 0;
};

struct EdgeRt {
  bool vms_done = false;
  bool vsm_done = false;
};

struct AppRt {
  bool admitted = false;
  bool finished = false;
  std::uint64_t arrival = 0;
  std::uint64_t admit = 0;
  std::uint64_t finish = 0;
  std::size_t tasks_left = 0;
  int cluster = -1;
  std::vector<TaskRt> tasks;
  std::vector<EdgeRt> edges;
};

// Same-cycle processing order: deliveries free links before anything new is issued.
enum class TimedKind { CommEnd = 0, ComputeEnd = 1, Arrival = 2, CommReady = 3 };

struct Timed {
  std::uint64_t time;
  TimedKind kind;
  CommKey key;  // for task events: app/master=task
  std::uint64_t seq;

  bool operator>(const Timed& o) const {
    return std::tie(time, kind, key, seq) > std::tie(o.time, o.kind, o.key, o.seq);
  }
};

struct PendingComm {
  std::uint64_t ready;
  CommKey key;
  auto operator<=>(const PendingComm&) const = default;
};

struct DeferredSend {
  int app;
  std::size_t edge;
};

class Engine {
 public:
  explicit Engine(const Scenario& scenario)
      : sc_(scenario),
        state_(scenario.arch),
        mapper_(scenario.heuristic, scenario.route_policy, scenario.arch, scenario.exec,
                scenario.cluster_initial_for_all),
        link_busy_(scenario.arch.link_slot_count(), false) {}

  SimResult run() {
    validate();
    init();
    while (!timed_.empty()) {
      const std::uint64_t t = timed_.top().time;
      load_area_ += static_cast<long double>(state_.ledger().total()) *
                    static_cast<long double>(t - now_);
      now_ = t;
      while (!timed_.empty() && timed_.top().time == t) {
        const Timed ev = timed_.top();
        timed_.pop();
        handle(ev);
      }
      progress();
    }
    finish_checks();
    return SimResult{build_report(), std::move(events_), std::move(state_)};
  }

 private:
  // --- setup -----------------------------------------------------------------

  void validate() const {
    if (sc_.apps.empty()) throw InputError("scenario has no applications");
    if (!sc_.arrivals.empty() && sc_.arrivals.size() != sc_.apps.size()) {
      throw InputError("arrival list does not match the application count");
    }
    for (const auto& g : sc_.apps) {
      g.validate();
      for (const auto& t : g.tasks()) {
        bool any = false;
        for (TileKind k : sc_.arch.kinds()) any = any || compatible(t.kind, k);
        if (!any) {
          throw ConfigError("no tile on the platform can run " + std::string(to_string(t.kind)) +
                            " task " + g.app_id() + "/" + t.id);
        }
      }
    }
  }

  void init() {
    apps_.resize(sc_.apps.size());
    for (std::size_t a = 0; a < sc_.apps.size(); ++a) {
      const TaskGraph& g = sc_.apps[a];
      AppRt& rt = apps_[a];
      rt.arrival = sc_.arrivals.empty() ? 0 : sc_.arrivals[a];
      rt.tasks.resize(g.tasks().size());
      rt.edges.resize(g.edges().size());
      rt.tasks_left = g.tasks().size();
      for (std::size_t t = 0; t < g.tasks().size(); ++t) {
        rt.tasks[t].waiting_inbound = g.in_edges(t).size();
      }
      push(rt.arrival, TimedKind::Arrival, CommKey{static_cast<int>(a), 0, 0, {}});
    }
  }

  // --- event plumbing ----------------------------------------------------------

  void push(std::uint64_t time, TimedKind kind, CommKey key) {
    timed_.push(Timed{time, kind, key, seq_++});
  }

  EventRecord record(EventKind kind, int app, int task = -1, int peer = -1) const {
    EventRecord r;
    r.cycle = now_;
    r.kind = kind;
    r.app = sc_.apps[static_cast<std::size_t>(app)].app_id();
    if (task >= 0) r.task = graph(app).task(static_cast<std::size_t>(task)).id;
    if (peer >= 0) r.peer = graph(app).task(static_cast<std::size_t>(peer)).id;
    return r;
  }

  const TaskGraph& graph(int app) const { return sc_.apps[static_cast<std::size_t>(app)]; }
  AppRt& rt(int app) { return apps_[static_cast<std::size_t>(app)]; }
  TaskRt& task_rt(int app, std::size_t task) { return rt(app).tasks[task]; }

  void handle(const Timed& ev) {
    switch (ev.kind) {
      case TimedKind::Arrival: {
        events_.push_back(record(EventKind::AppArrive, ev.key.app));
        admission_queue_.push_back(ev.key.app);
        admission_dirty_ = true;
        break;
      }
      case TimedKind::ComputeEnd: on_compute_end(ev.key.app, static_cast<std::size_t>(ev.key.master)); break;
      case TimedKind::CommReady: pending_.insert(PendingComm{now_, ev.key}); break;
      case TimedKind::CommEnd: on_comm_end(ev.key); break;
    }
  }

  // Repeats until nothing changes at the current cycle.
  void progress() {
    bool changed = true;
    while (changed) {
      changed = false;
      if (tile_freed_) {
        tile_freed_ = false;
        admission_dirty_ = true;
        changed |= retry_deferred();
      }
      if (admission_dirty_) {
        admission_dirty_ = false;
        changed |= admit();
      }
      changed |= dispatch();
    }
  }

  // --- admission -----------------------------------------------------------------

  std::size_t running_apps() const {
    return static_cast<std::size_t>(std::count_if(
        apps_.begin(), apps_.end(), [](const AppRt& a) { return a.admitted && !a.finished; }));
  }

  bool admit() {
    bool any = false;
    while (!admission_queue_.empty()) {
      if (sc_.max_concurrent_apps && running_apps() >= *sc_.max_concurrent_apps) break;
      const int app = admission_queue_.front();
      const std::size_t root = graph(app).root();
      MapRequest req{TaskRef{app, static_cast<int>(root)}, TaskKind::Initial, std::nullopt, 0, 0};
      const InitialPlacement placement = mapper_.map_initial(req, state_);
      evaluations_ += placement.outcome.evaluations;
      if (placement.queued || !placement.outcome.tile) break;

      admission_queue_.pop_front();
      AppRt& a = rt(app);
      a.admitted = true;
      a.admit = now_;
      a.cluster = placement.cluster ? static_cast<int>(*placement.cluster) : -1;
      max_clusters_held_ = std::max(max_clusters_held_, mapper_.clusters().held_count());

      EventRecord admitted = record(EventKind::AppAdmit, app, static_cast<int>(root));
      admitted.cluster = a.cluster;
      admitted.tile = placement.outcome.tile;
      events_.push_back(std::move(admitted));
      place(app, root, *placement.outcome.tile);
      maybe_start(app, root);
      any = true;
    }
    return any;
  }

  // --- mapping ---------------------------------------------------------------------

  void place(int app, std::size_t task, Coord tile) {
    const Task& t = graph(app).task(task);
    state_.place(TaskRef{app, static_cast<int>(task)}, t.kind, tile);
    task_rt(app, task).mapped = true;
    EventRecord r = record(EventKind::TaskMap, app, static_cast<int>(task));
    r.tile = tile;
    r.tile_kind = sc_.arch.kind(tile);
    events_.push_back(std::move(r));
  }

  /// Master side of an edge after the master computed. Returns false if the slave could
  /// not be placed and the send was deferred.
  bool send(int app, std::size_t edge_index) {
    const Edge& e = graph(app).edges()[edge_index];
    const Coord master_tile = *state_.tile_of(TaskRef{app, static_cast<int>(e.master)});
    bool mapped_now = false;
    if (!task_rt(app, e.slave).mapped) {
      MapRequest req{TaskRef{app, static_cast<int>(e.slave)}, graph(app).task(e.slave).kind,
                     master_tile, e.vms, e.vsm};
      const MapOutcome outcome = mapper_.map_task(req, state_);
      evaluations_ += outcome.evaluations;
      if (!outcome.tile) return false;
      place(app, e.slave, *outcome.tile);
      mapped_now = true;
    }
    const Coord slave_tile = *state_.tile_of(TaskRef{app, static_cast<int>(e.slave)});
    const CommKey down{app, static_cast<int>(e.master), static_cast<int>(e.slave),
                       Direction::MasterToSlave};
    const CommKey up{app, static_cast<int>(e.master), static_cast<int>(e.slave),
                     Direction::SlaveToMaster};
    if (e.vms > 0) {
      state_.apply_route(down, route(sc_.route_policy, sc_.arch, master_tile, slave_tile,
                                     state_.ledger()), e.vms);
    }
    if (e.vsm > 0) {
      state_.apply_route(up, route(sc_.route_policy, sc_.arch, slave_tile, master_tile,
                                   state_.ledger()), e.vsm);
    }
    peak_ = std::max(peak_, state_.ledger().peak());
    issue(down, now_ + (mapped_now ? sc_.params.manager_overhead : 0));
    return true;
  }

  bool retry_deferred() {
    bool any = false;
    std::deque<DeferredSend> still;
    while (!deferred_.empty()) {
      const DeferredSend d = deferred_.front();
      deferred_.pop_front();
      if (send(d.app, d.edge)) {
        any = true;
      } else {
        still.push_back(d);
      }
    }
    deferred_ = std::move(still);
    return any;
  }

  // --- computation -------------------------------------------------------------------

  void maybe_start(int app, std::size_t task) {
    TaskRt& t = task_rt(app, task);
    if (!t.mapped || t.started || t.waiting_inbound > 0) return;
    t.started = true;
    const Coord tile = *state_.tile_of(TaskRef{app, static_cast<int>(task)});
    EventRecord r = record(EventKind::ComputeStart, app, static_cast<int>(task));
    r.tile = tile;
    r.tile_kind = sc_.arch.kind(tile);
    events_.push_back(std::move(r));
    push(now_ + compute_time(graph(app).task(task), sc_.arch.kind(tile), sc_.params),
         TimedKind::ComputeEnd, CommKey{app, static_cast<int>(task), 0, {}});
  }

  void on_compute_end(int app, std::size_t task) {
    const Task& t = graph(app).task(task);
    const Coord tile = *state_.tile_of(TaskRef{app, static_cast<int>(task)});
    const TileKind kind = sc_.arch.kind(tile);
    energy_compute_ += compute_energy(t, kind, sc_.params);
    task_rt(app, task).computed = true;

    EventRecord r = record(EventKind::ComputeEnd, app, static_cast<int>(task));
    r.tile = tile;
    r.tile_kind = kind;
    r.instructions = t.instructions;
    events_.push_back(std::move(r));

    // Replies to masters travel on routes pinned when this task was sent to.
    for (std::size_t e : graph(app).in_edges(task)) {
      const Edge& edge = graph(app).edges()[e];
      issue(CommKey{app, static_cast<int>(edge.master), static_cast<int>(task),
                    Direction::SlaveToMaster},
            now_);
    }
    for (std::size_t e : graph(app).out_edges(task)) {
      if (!send(app, e)) {
        ++deferred_count_;
        deferred_.push_back(DeferredSend{app, e});
        EventRecord d = record(EventKind::MapDefer, app, static_cast<int>(graph(app).edges()[e].slave),
                               static_cast<int>(task));
        events_.push_back(std::move(d));
      }
    }
    check_done(app, task);
  }

  // --- communication -------------------------------------------------------------------

  std::uint64_t volume_of(const CommKey& key) const {
    const TaskGraph& g = graph(key.app);
    for (std::size_t e : g.out_edges(static_cast<std::size_t>(key.master))) {
      const Edge& edge = g.edges()[e];
      if (edge.slave == static_cast<std::size_t>(key.slave)) {
        return key.direction == Direction::MasterToSlave ? edge.vms : edge.vsm;
      }
    }
    throw LogicError("communication without an edge");
  }

  std::size_t edge_of(const CommKey& key) const {
    const TaskGraph& g = graph(key.app);
    for (std::size_t e : g.out_edges(static_cast<std::size_t>(key.master))) {
      if (g.edges()[e].slave == static_cast<std::size_t>(key.slave)) return e;
    }
    throw LogicError("communication without an edge");
  }

  void issue(const CommKey& key, std::uint64_t ready) {
    if (volume_of(key) == 0) {
      if (ready == now_) {
        deliver(key);
      } else {
        push(ready, TimedKind::CommReady, key);
      }
      return;
    }
    if (ready == now_) {
      pending_.insert(PendingComm{ready, key});
    } else {
      push(ready, TimedKind::CommReady, key);
    }
  }

  std::vector<std::size_t> slots_of(const Path& path) const {
    std::vector<std::size_t> slots;
    for (std::size_t i = 1; i < path.size(); ++i) slots.push_back(sc_.arch.link_slot(path[i - 1], path[i]));
    return slots;
  }

  bool dispatch() {
    bool any = false;
    for (auto it = pending_.begin(); it != pending_.end();) {
      const CommKey key = it->key;
      if (volume_of(key) == 0) {
        it = pending_.erase(it);
        deliver(key);
        any = true;
        continue;
      }
      const Route& r = state_.routes().at(key);
      const auto slots = slots_of(r.path);
      if (std::any_of(slots.begin(), slots.end(), [&](std::size_t s) { return link_busy_[s]; })) {
        ++it;
        continue;
      }
      for (std::size_t s : slots) link_busy_[s] = true;
      const std::uint64_t hops = r.path.size() - 1;
      const std::uint64_t end = now_ + comm_latency(r.volume, hops, 0);
      EventRecord ev = record(EventKind::CommStart, key.source().app, key.source().task,
                              key.destination().task);
      ev.tile = r.path.front();
      ev.volume = r.volume;
      ev.hops = hops;
      ev.path = r.path;
      events_.push_back(std::move(ev));
      push(end, TimedKind::CommEnd, key);
      it = pending_.erase(it);
      any = true;
    }
    return any;
  }

  void on_comm_end(const CommKey& key) {
    const Route r = state_.routes().at(key);
    for (std::size_t s : slots_of(r.path)) link_busy_[s] = false;
    const std::uint64_t hops = r.path.size() - 1;
    energy_comm_ += r.volume * hops * sc_.params.energy_per_packet_hop;
    state_.release_route(key);

    EventRecord ev = record(EventKind::CommEnd, key.source().app, key.source().task,
                            key.destination().task);
    ev.tile = r.path.back();
    ev.volume = r.volume;
    ev.hops = hops;
    events_.push_back(std::move(ev));
    deliver(key);
  }

  void deliver(const CommKey& key) {
    EdgeRt& e = rt(key.app).edges[edge_of(key)];
    const auto master = static_cast<std::size_t>(key.master);
    const auto slave = static_cast<std::size_t>(key.slave);
    if (key.direction == Direction::MasterToSlave) {
      e.vms_done = true;
      --task_rt(key.app, slave).waiting_inbound;
      maybe_start(key.app, slave);
    } else {
      e.vsm_done = true;
    }
    check_done(key.app, master);
    check_done(key.app, slave);
  }

  // --- completion ------------------------------------------------------------------------

  bool edges_settled(int app, const std::vector<std::size_t>& edges) {
    return std::all_of(edges.begin(), edges.end(), [&](std::size_t e) {
      const EdgeRt& s = rt(app).edges[e];
      return s.vms_done && s.vsm_done;
    });
  }

  void check_done(int app, std::size_t task) {
    TaskRt& t = task_rt(app, task);
    if (!t.computed || t.done) return;
    const TaskGraph& g = graph(app);
    if (!edges_settled(app, g.in_edges(task)) || !edges_settled(app, g.out_edges(task))) return;
    t.done = true;
    AppRt& a = rt(app);
    EventRecord r = record(EventKind::TaskDone, app, static_cast<int>(task));
    r.tile = state_.tile_of(TaskRef{app, static_cast<int>(task)});
    events_.push_back(std::move(r));
    tile_freed_ = true;
    if (--a.tasks_left > 0) {
      state_.unplace(TaskRef{app, static_cast<int>(task)});
      return;
    }
    state_.release_app(app);
    mapper_.release_app(app);
    a.finished = true;
    a.finish = now_;
    admission_dirty_ = true;
    EventRecord done = record(EventKind::AppDone, app);
    done.cluster = a.cluster;
    events_.push_back(std::move(done));
  }

  void finish_checks() const {
    for (std::size_t a = 0; a < apps_.size(); ++a) {
      if (!apps_[a].finished) {
        throw SimulationError("no progress possible: application " + sc_.apps[a].app_id() +
                              " cannot finish (" + std::to_string(deferred_.size()) +
                              " deferred mapping requests, " +
                              std::to_string(admission_queue_.size()) + " queued applications)");
      }
    }
  }

  SimReport build_report() const {
    SimReport rep;
    rep.heuristic = sc_.heuristic;
    rep.route_policy = sc_.route_policy;
    rep.seed = sc_.seed;
    rep.app_count = sc_.apps.size();
    for (std::size_t a = 0; a < apps_.size(); ++a) {
      rep.makespan = std::max(rep.makespan, apps_[a].finish);
      rep.apps.push_back(AppReport{sc_.apps[a].app_id(), apps_[a].arrival, apps_[a].admit,
                                   apps_[a].finish});
    }
    rep.energy_compute = energy_compute_;
    rep.energy_comm = energy_comm_;
    rep.total_energy = energy_compute_ + energy_comm_;
    rep.peak_link_load = peak_;
    rep.avg_link_load =
        rep.makespan == 0
            ? 0.0
            : static_cast<double>(load_area_ / (static_cast<long double>(sc_.arch.link_count()) *
                                                static_cast<long double>(rep.makespan)));
    rep.mapping_evaluations = evaluations_;
    rep.deferred_requests = deferred_count_;
    rep.max_clusters_held = max_clusters_held_;
    return rep;
  }

  const Scenario& sc_;
  MappingState state_;
  Mapper mapper_;
  std::vector<AppRt> apps_;
  std::priority_queue<Timed, std::vector<Timed>, std::greater<>> timed_;
  std::set<PendingComm> pending_;
  std::deque<DeferredSend> deferred_;
  std::deque<int> admission_queue_;
  std::vector<bool> link_busy_;
  std::vector<EventRecord> events_;
  std::uint64_t now_ = 0;
  std::uint64_t seq_ = 0;
  bool tile_freed_ = false;
  bool admission_dirty_ = false;
  long double load_area_ = 0;
  std::uint64_t peak_ = 0;
  std::uint64_t energy_compute_ = 0;
  std::uint64_t energy_comm_ = 0;
  std::uint64_t evaluations_ = 0;
  std::size_t deferred_count_ = 0;
  std::size_t max_clusters_held_ = 0;
};

}  // namespace

SimResult simulate(const Scenario& scenario) { return Engine(scenario).run(); }

std::vector<SimResult> simulate_all(const std::vector<Scenario>& scenarios, ExecPolicy exec) {
  std::vector<std::optional<SimResult>> results(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
  const auto n = static_cast<std::ptrdiff_t>(scenarios.size());
#pragma omp parallel for schedule(dynamic) if (exec == ExecPolicy::Parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      results[idx].emplace(simulate(scenarios[idx]));
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<SimResult> out;
  out.reserve(results.size());
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

std::vector<SimReport> run_comparison(const std::vector<Scenario>& scenarios, ExecPolicy exec) {
  if (scenarios.empty()) throw InputError("comparison needs at least one scenario");
  for (const auto& s : scenarios) {
    if (s.apps != scenarios.front().apps || s.seed != scenarios.front().seed ||
        s.arrivals != scenarios.front().arrivals || !(s.arch == scenarios.front().arch) ||
        s.params != scenarios.front().params) {
      throw InputError("comparison scenarios must share workload, arrivals, platform and seed");
    }
  }
  std::vector<SimReport> reports;
  for (auto& r : simulate_all(scenarios, exec)) reports.push_back(std::move(r.report));
  return reports;
}

}  // namespace nocmap
