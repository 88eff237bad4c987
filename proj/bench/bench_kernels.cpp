// Serial vs OpenMP versions of the two hot loops: candidate scoring and scenario sweeps.

#include <benchmark/benchmark.h>

#include <random>

#include "nocmap/oracle.hpp"
#include "nocmap/simulator.hpp"
#include "nocmap/workload_io.hpp"

using namespace nocmap;

namespace {

struct ScoringFixture {
  MappingState state;
  MapRequest req;
  std::vector<Coord> candidates;
};

ScoringFixture make_fixture() {
  std::mt19937_64 rng(11);
  const ArchGraph arch = ArchGraph::default_platform();
  auto c = oracle::random_case(arch, rng);
  c.request.kind = TaskKind::Software;
  std::vector<Coord> cands;
  for (const Tile& t : arch.tiles()) {
    if (t.kind == TileKind::ISP && c.state.is_free(t.coord)) cands.push_back(t.coord);
  }
  return {std::move(c.state), c.request, std::move(cands)};
}

template <bool Parallel>
void BM_ScoreCandidates(benchmark::State& st) {
  const ScoringFixture f = make_fixture();
  const auto obj = static_cast<kernels::Objective>(st.range(0));
  for (auto _ : st) {
    auto scores = Parallel ? kernels::score_candidates_parallel(obj, f.req, f.state, RoutePolicy::ModifiedDijkstra, f.candidates)
                           : kernels::score_candidates_serial(obj, f.req, f.state, RoutePolicy::ModifiedDijkstra, f.candidates);
    benchmark::DoNotOptimize(scores.data());
  }
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * f.candidates.size()));
}

std::vector<Scenario> sweep_cells() {
  std::vector<Scenario> cells;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    GenConfig cfg;
    cfg.app_count = 10;
    cfg.seed = seed;
    const auto apps = generate_workload(cfg);
    for (HeuristicKind h : {HeuristicKind::Spiral, HeuristicKind::NN, HeuristicKind::BN})
      cells.push_back(make_scenario(apps, h, seed));
  }
  return cells;
}

template <ExecPolicy P>
void BM_SimulateAll(benchmark::State& st) {
  const auto cells = sweep_cells();
  for (auto _ : st) {
    auto r = simulate_all(cells, P);
    benchmark::DoNotOptimize(r.data());
  }
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * cells.size()));
}

}  // namespace

BENCHMARK(BM_ScoreCandidates<false>)->Name("score_candidates/serial")->DenseRange(0, 2);
BENCHMARK(BM_ScoreCandidates<true>)->Name("score_candidates/parallel")->DenseRange(0, 2);
BENCHMARK(BM_SimulateAll<ExecPolicy::Serial>)->Name("simulate_all/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateAll<ExecPolicy::Parallel>)->Name("simulate_all/parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
