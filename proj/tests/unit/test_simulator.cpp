#include <gtest/gtest.h>

#include <map>
#include <set>
#include <tuple>

#include "nocmap/errors.hpp"
#include "nocmap/oracle.hpp"
#include "nocmap/simulator.hpp"
#include "nocmap/workload_io.hpp"

using namespace nocmap;

namespace {

TaskGraph single_initial(std::uint64_t instructions, std::string id = "solo") {
  TaskGraph g(std::move(id));
  g.add_task("t0", TaskKind::Initial, instructions);
  return g;
}

const EventRecord* find_event(const std::vector<EventRecord>& evs, EventKind kind,
                              const std::string& task) {
  for (const auto& e : evs) {
    if (e.kind == kind && e.task == task) return &e;
  }
  return nullptr;
}

/// Cycle-by-cycle toy: one packet per link per cycle, store-and-forward per hop.
std::uint64_t toy_stream_cycles(std::uint64_t volume, std::uint64_t hops) {
  std::vector<std::uint64_t> at(volume, 0);  // hop position of each packet
  std::uint64_t cycle = 0;
  std::size_t delivered = 0;
  while (delivered < volume) {
    ++cycle;
    // Each link forwards at most one packet per cycle; packets enter in order.
    std::vector<bool> link_used(hops, false);
    for (std::size_t p = 0; p < volume; ++p) {
      if (at[p] == hops) continue;
      if (link_used[at[p]]) continue;
      if (p > 0 && at[p - 1] <= at[p]) continue;  // cannot overtake
      link_used[at[p]] = true;
      ++at[p];
      if (at[p] == hops) ++delivered;
    }
  }
  return cycle;
}

}  // namespace

TEST(Params, PlatformConstants) {
  const PlatformParams p;
  Task t{"t", TaskKind::Software, 100};
  EXPECT_EQ(compute_time(t, TileKind::ISP, p), 4000u);
  EXPECT_EQ(compute_energy(t, TileKind::ISP, p), 1000u);
  t.kind = TaskKind::Hardware;
  EXPECT_EQ(compute_time(t, TileKind::RA, p), 2000u);
  EXPECT_EQ(compute_energy(t, TileKind::RA, p), 2000u);
  EXPECT_THROW((void)compute_time(t, TileKind::ISP, p), LogicError);
  EXPECT_THROW((void)compute_energy(t, TileKind::Manager, p), LogicError);
}

TEST(CommLatency, PipelinedStream) {
  EXPECT_EQ(comm_latency(100, 3, 0), 102u);
  EXPECT_EQ(comm_latency(1, 1, 0), 1u);
  EXPECT_EQ(comm_latency(100, 3, 7), 109u);
  EXPECT_EQ(comm_latency(0, 0, 5), 5u);
  EXPECT_THROW((void)comm_latency(5, 0, 0), LogicError);
  for (std::uint64_t v : {1u, 2u, 7u, 100u}) {
    for (std::uint64_t h : {1u, 2u, 5u, 14u}) {
      EXPECT_EQ(comm_latency(v, h, 0), toy_stream_cycles(v, h)) << v << " packets, " << h << " hops";
    }
  }
}

TEST(Simulate, SingleInitialTask) {
  const SimResult r = simulate(make_scenario({single_initial(100)}, HeuristicKind::Spiral, 1));
  EXPECT_EQ(r.report.makespan, 4000u);
  EXPECT_EQ(r.report.total_energy, 1000u);
  EXPECT_EQ(r.report.energy_comm, 0u);
  EXPECT_EQ(r.report.apps.size(), 1u);
  EXPECT_EQ(r.report.apps[0].queue_wait(), 0u);
}

TEST(Simulate, HardwareSlaveTimingAndEnergy) {
  TaskGraph g("hw");
  g.add_task("t0", TaskKind::Initial, 100);
  g.add_task("t1", TaskKind::Hardware, 100);
  g.add_edge("t0", "t1", 100, 100);
  for (HeuristicKind h : all_heuristics()) {
    const SimResult r = simulate(make_scenario({g}, h, 1));
    const auto* start = find_event(r.events, EventKind::ComputeStart, "t1");
    const auto* end = find_event(r.events, EventKind::ComputeEnd, "t1");
    ASSERT_TRUE(start && end) << to_string(h);
    EXPECT_EQ(end->cycle - start->cycle, 2000u) << to_string(h);
    EXPECT_EQ(end->tile_kind, TileKind::RA);
    EXPECT_EQ(r.report.energy_compute, 1000u + 2000u) << to_string(h);
  }
}

TEST(Simulate, TwoStreamsShareALink) {
  // 4x1 strip M I I I: t0 lands on (1,0), t1 on (2,0), t2 on (3,0). Both sends leave at
  // cycle 4000 and both need (1,0)->(2,0); t1's stream goes first by key order.
  const ArchGraph strip(4, 1, {TileKind::Manager, TileKind::ISP, TileKind::ISP, TileKind::ISP});
  TaskGraph g("a");
  g.add_task("t0", TaskKind::Initial, 100);
  g.add_task("t1", TaskKind::Software, 100);
  g.add_task("t2", TaskKind::Software, 100);
  g.add_edge("t0", "t1", 10, 0);
  g.add_edge("t0", "t2", 10, 0);
  const SimResult r = simulate(make_scenario({g}, HeuristicKind::NN, 1, strip));

  std::vector<const EventRecord*> starts;
  std::vector<const EventRecord*> ends;
  for (const auto& e : r.events) {
    if (e.kind == EventKind::CommStart) starts.push_back(&e);
    if (e.kind == EventKind::CommEnd) ends.push_back(&e);
  }
  ASSERT_EQ(starts.size(), 2u);
  EXPECT_EQ(starts[0]->peer, "t1");
  EXPECT_EQ(starts[0]->cycle, 4000u);
  EXPECT_EQ(starts[1]->peer, "t2");
  EXPECT_EQ(starts[1]->cycle, 4000u + 10u);  // waits for the first stream's reservation
  EXPECT_EQ(ends[1]->cycle, 4010u + 2u + 10u - 1u);
  EXPECT_EQ(r.report.makespan, 4021u + 4000u);
  EXPECT_EQ(r.report.energy_comm, 10u * 1u + 10u * 2u);
}

TEST(Simulate, ManagerOverheadDelaysMappedSends) {
  TaskGraph g("a");
  g.add_task("t0", TaskKind::Initial, 100);
  g.add_task("t1", TaskKind::Software, 100);
  g.add_edge("t0", "t1", 10, 0);
  Scenario s = make_scenario({g}, HeuristicKind::NN, 1);
  const auto base = simulate(s).report.makespan;
  s.params.manager_overhead = 50;
  EXPECT_EQ(simulate(s).report.makespan, base + 50);
}

TEST(Simulate, TenAppsSpiralQueue) {
  GenConfig cfg;
  cfg.app_count = 10;
  cfg.seed = 1;
  const SimResult r = simulate(make_scenario(generate_workload(cfg), HeuristicKind::Spiral, 1));
  EXPECT_GT(r.report.max_queue_wait(), 0u);
  EXPECT_LE(r.report.max_clusters_held, 9u);
  EXPECT_EQ(oracle::max_clusters_from_log(r.events), r.report.max_clusters_held);
}

TEST(Simulate, NoCompatibleTileIsAConfigError) {
  // 2x2 default layout has no RA tile.
  TaskGraph g("hw");
  g.add_task("t0", TaskKind::Initial, 1);
  g.add_task("t1", TaskKind::Hardware, 1);
  g.add_edge("t0", "t1", 1, 1);
  EXPECT_THROW((void)simulate(make_scenario({g}, HeuristicKind::NN, 0,
                                            ArchGraph::with_default_layout(2, 2))),
               ConfigError);
}

TEST(Simulate, InvalidGraphRejected) {
  TaskGraph g("bad");
  g.add_task("t0", TaskKind::Software, 1);
  EXPECT_THROW((void)simulate(make_scenario({g}, HeuristicKind::NN, 0)), ValidationError);
}

TEST(Simulate, ArrivalsAreHonoured) {
  Scenario s = make_scenario({single_initial(10, "a"), single_initial(10, "b")}, HeuristicKind::FF, 0);
  s.arrivals = {0, 1000};
  const SimResult r = simulate(s);
  EXPECT_EQ(r.report.apps[1].arrival, 1000u);
  EXPECT_EQ(r.report.apps[1].admitted, 1000u);
  EXPECT_EQ(r.report.makespan, 1400u);
}

class RandomScenarios : public ::testing::TestWithParam<HeuristicKind> {};

TEST_P(RandomScenarios, ConservationCausalityCleanup) {
  const HeuristicKind h = GetParam();
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    GenConfig cfg;
    cfg.app_count = 1 + seed * 2;
    cfg.seed = seed;
    const auto apps = generate_workload(cfg);
    const Scenario sc = make_scenario(apps, h, seed);
    const SimResult r = simulate(sc);

    // Energy recomputed from the log.
    const auto e = oracle::recompute_energy(r.events, sc.params);
    ASSERT_EQ(e.compute, r.report.energy_compute);
    ASSERT_EQ(e.comm, r.report.energy_comm);
    ASSERT_EQ(e.total(), r.report.total_energy);

    // Cleanup.
    ASSERT_TRUE(r.final_state.ledger().all_zero());
    ASSERT_EQ(r.final_state.occupied_count(), 0u);
    ASSERT_TRUE(r.final_state.routes().empty());

    // Causality: inbound deliveries before compute start; sends after master compute.
    std::map<std::pair<std::string, std::string>, std::uint64_t> compute_start, compute_end;
    for (const auto& ev : r.events) {
      if (ev.kind == EventKind::ComputeStart) compute_start[{ev.app, ev.task}] = ev.cycle;
      if (ev.kind == EventKind::ComputeEnd) compute_end[std::pair(ev.app, ev.task)] = ev.cycle;
    }
    std::set<std::tuple<std::string, std::string, std::string>> forward;
    for (const auto& g : apps) {
      for (const auto& edge : g.edges()) {
        forward.insert({g.app_id(), g.task(edge.master).id, g.task(edge.slave).id});
      }
    }
    for (const auto& ev : r.events) {
      if (ev.kind == EventKind::CommStart) {
        ASSERT_TRUE(compute_end.count({ev.app, ev.task}));
        ASSERT_GE(ev.cycle, compute_end[std::pair(ev.app, ev.task)]);
      }
      if (ev.kind == EventKind::CommEnd && forward.count({ev.app, ev.task, ev.peer})) {
        ASSERT_GE(compute_start[std::pair(ev.app, ev.peer)], ev.cycle);
      }
    }

    // Makespan lower bound per app.
    for (const auto& g : apps) {
      ASSERT_GE(r.report.makespan, oracle::critical_path_lower_bound(g, sc.params));
    }
    ASSERT_LE(r.report.avg_link_load, static_cast<double>(r.report.peak_link_load));
    ASSERT_EQ(r.report.app_count, apps.size());
    ASSERT_EQ(r.report.total_energy, r.report.energy_compute + r.report.energy_comm);
  }
}

TEST_P(RandomScenarios, Deterministic) {
  GenConfig cfg;
  cfg.app_count = 7;
  cfg.seed = 3;
  const Scenario sc = make_scenario(generate_workload(cfg), GetParam(), 3);
  const SimResult a = simulate(sc);
  const SimResult b = simulate(sc);
  EXPECT_EQ(a.events, b.events);
  EXPECT_EQ(format_event_log(a.events), format_event_log(b.events));
  EXPECT_EQ(to_row(a.report), to_row(b.report));
}

INSTANTIATE_TEST_SUITE_P(AllHeuristics, RandomScenarios, ::testing::ValuesIn(all_heuristics()),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Simulate, ClusterInitialForAllSwitch) {
  GenConfig cfg;
  cfg.app_count = 3;
  cfg.seed = 9;
  Scenario s = make_scenario(generate_workload(cfg), HeuristicKind::NN, 9);
  s.cluster_initial_for_all = true;
  const SimResult r = simulate(s);
  const auto* first = find_event(r.events, EventKind::AppAdmit, "t0");
  ASSERT_TRUE(first);
  EXPECT_EQ(first->tile, (Coord{1, 1}));
  EXPECT_GE(first->cluster, 0);
}

TEST(RunComparison, SharedWorkloadAndErrors) {
  GenConfig cfg;
  cfg.app_count = 3;
  cfg.seed = 4;
  const auto apps = generate_workload(cfg);
  std::vector<Scenario> cells;
  for (HeuristicKind h : {HeuristicKind::Spiral, HeuristicKind::NN, HeuristicKind::BN}) {
    cells.push_back(make_scenario(apps, h, 4));
  }
  const auto serial = run_comparison(cells, ExecPolicy::Serial);
  const auto parallel = run_comparison(cells, ExecPolicy::Parallel);
  ASSERT_EQ(serial.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(serial[i].app_count, 3u);
    EXPECT_EQ(serial[i].heuristic, cells[i].heuristic);
    EXPECT_EQ(to_row(serial[i]), to_row(parallel[i]));
  }
  cells[1].seed = 5;
  EXPECT_THROW((void)run_comparison(cells), InputError);
  EXPECT_THROW((void)run_comparison({}), InputError);
}

TEST(EventKinds, Names) {
  for (auto k : {EventKind::AppArrive, EventKind::AppAdmit, EventKind::TaskMap, EventKind::MapDefer,
                 EventKind::ComputeStart, EventKind::ComputeEnd, EventKind::CommStart,
                 EventKind::CommEnd, EventKind::TaskDone, EventKind::AppDone}) {
    EXPECT_EQ(parse_event_kind(to_string(k)), k);
  }
  EXPECT_EQ(to_string(EventKind::ComputeEnd), "compute_end");
}
