#include "nocmap/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "nocmap/errors.hpp"

namespace nocmap::oracle {

namespace {

std::string show(Coord c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

std::string show(const Path& p) {
  std::string s;
  for (Coord c : p) s += show(c);
  return s;
}

bool hosts(TaskKind task, TileKind tile) {
  if (tile == TileKind::Manager) return false;
  return tile == TileKind::RA ? task == TaskKind::Hardware : task != TaskKind::Hardware;
}

Path reference_xy(Coord src, Coord dst) {
  Path p{src};
  for (int x = src.x; x != dst.x;) {
    x += x < dst.x ? 1 : -1;
    p.push_back(Coord{x, src.y});
  }
  for (int y = src.y; y != dst.y;) {
    y += y < dst.y ? 1 : -1;
    p.push_back(Coord{dst.x, y});
  }
  return p;
}

std::uint64_t sum_loads(const Path& p, const ChannelLoadLedger& ledger) {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) sum += ledger.load(p[i], p[i + 1]);
  return sum;
}

struct LinkTotals {
  std::uint64_t peak = 0;
  std::uint64_t total = 0;
};

LinkTotals totals(const ArchGraph& arch, const ChannelLoadLedger& ledger) {
  LinkTotals t;
  for (int y = 0; y < arch.height(); ++y) {
    for (int x = 0; x < arch.width(); ++x) {
      const Coord here{x, y};
      const Coord next[] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
      for (Coord n : next) {
        if (!arch.contains(n)) continue;
        const std::uint64_t v = ledger.load(here, n);
        t.peak = std::max(t.peak, v);
        t.total += v;
      }
    }
  }
  return t;
}

/// Position of `c` on the clockwise ring around `center`, starting at the west tile.
std::pair<int, int> ring_position(Coord center, Coord c) {
  const int dx = c.x - center.x;
  const int dy = c.y - center.y;
  const int h = std::max(std::abs(dx), std::abs(dy));
  int pos = 0;
  if (dx == -h && dy <= 0) pos = -dy;                 // west edge, going up
  else if (dy == -h) pos = h + (dx + h);              // north edge, going east
  else if (dx == h) pos = 3 * h + (dy + h);           // east edge, going down
  else if (dy == h) pos = 5 * h + (h - dx);           // south edge, going west
  else pos = 7 * h + (h - dy);                        // west edge, back up
  return {h, pos};
}

}  // namespace

Path reference_route(RoutePolicy policy, const ArchGraph& arch, Coord src, Coord dst,
                     const ChannelLoadLedger& ledger) {
  return policy == RoutePolicy::XY ? reference_xy(src, dst)
                                   : route_oracle(arch, src, dst, ledger);
}

std::optional<Coord> brute_force_place(HeuristicKind kind, const MapRequest& req,
                                       const MappingState& state, RoutePolicy policy) {
  const ArchGraph& arch = state.arch();
  const Coord from = *req.requester;
  using Key = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>;
  std::optional<std::pair<Key, Coord>> best;
  for (int y = 0; y < arch.height(); ++y) {
    for (int x = 0; x < arch.width(); ++x) {
      const Coord c{x, y};
      if (!hosts(req.kind, arch.kind(c)) || state.occupant(c)) continue;
      const auto index = static_cast<std::uint64_t>(y * arch.width() + x);
      const auto dist = static_cast<std::uint64_t>(std::abs(c.x - from.x) + std::abs(c.y - from.y));
      Key key;
      switch (kind) {
        case HeuristicKind::NN:
          key = {dist, static_cast<std::uint64_t>(y), static_cast<std::uint64_t>(x), 0};
          break;
        case HeuristicKind::Spiral: {
          const auto [ring, pos] = ring_position(from, c);
          key = {static_cast<std::uint64_t>(ring), static_cast<std::uint64_t>(pos), 0, 0};
          break;
        }
        case HeuristicKind::PL:
        case HeuristicKind::BN: {
          const Path there = reference_route(policy, arch, from, c, state.ledger());
          const Path back = reference_route(policy, arch, c, from, state.ledger());
          const std::uint64_t cost = sum_loads(there, state.ledger()) + sum_loads(back, state.ledger());
          const std::uint64_t hops = there.size() + back.size() - 2;
          key = kind == HeuristicKind::PL ? Key{cost, hops, index, 0} : Key{dist, cost, hops, index};
          break;
        }
        case HeuristicKind::MMC:
        case HeuristicKind::MAC: {
          ChannelLoadLedger trial = state.ledger();
          if (req.vms > 0) {
            const Path p = reference_route(policy, arch, from, c, trial);
            for (std::size_t i = 0; i + 1 < p.size(); ++i) trial.add(p[i], p[i + 1], req.vms);
          }
          if (req.vsm > 0) {
            const Path p = reference_route(policy, arch, c, from, trial);
            for (std::size_t i = 0; i + 1 < p.size(); ++i) trial.add(p[i], p[i + 1], req.vsm);
          }
          const LinkTotals t = totals(arch, trial);
          key = kind == HeuristicKind::MMC ? Key{t.peak, t.total, index, 0}
                                           : Key{t.total, t.peak, index, 0};
          break;
        }
        case HeuristicKind::FF:
          throw InputError("first-free has no brute-force placement oracle");
      }
      if (!best || key < best->first) best = {key, c};
    }
  }
  if (!best) return std::nullopt;
  return best->second;
}

ChannelLoadLedger random_ledger(const ArchGraph& arch, std::mt19937_64& rng,
                                std::uint64_t max_load) {
  ChannelLoadLedger ledger(arch);
  for (std::size_t i = 0; i < arch.tile_count(); ++i) {
    const Coord c = arch.coord_of(i);
    for (Coord n : arch.neighbors(c)) ledger.add(c, n, rng() % (max_load + 1));
  }
  return ledger;
}

RandomCase random_case(const ArchGraph& arch, std::mt19937_64& rng) {
  MappingState state(arch);
  std::vector<Coord> hosts_any;
  for (std::size_t i = 0; i < arch.tile_count(); ++i) {
    if (arch.kind(arch.coord_of(i)) != TileKind::Manager) hosts_any.push_back(arch.coord_of(i));
  }
  std::shuffle(hosts_any.begin(), hosts_any.end(), rng);
  // Between 2 and 60% of the hosts are occupied.
  const std::size_t occupied = 2 + rng() % std::max<std::size_t>(1, hosts_any.size() * 6 / 10 - 1);
  auto kind_for = [&](Coord c) {
    return arch.kind(c) == TileKind::RA ? TaskKind::Hardware : TaskKind::Software;
  };
  for (std::size_t i = 0; i < occupied; ++i) {
    state.place(TaskRef{static_cast<int>(i / 2), static_cast<int>(i % 2)}, kind_for(hosts_any[i]),
                hosts_any[i]);
  }
  // Each placed pair exchanges traffic on a random monotone path.
  for (std::size_t i = 0; i + 1 < occupied; i += 2) {
    for (Direction dir : {Direction::MasterToSlave, Direction::SlaveToMaster}) {
      const CommKey key{static_cast<int>(i / 2), 0, 1, dir};
      const Coord src = *state.tile_of(key.source());
      const Coord dst = *state.tile_of(key.destination());
      std::vector<Coord> steps;
      for (int k = 0; k < std::abs(dst.x - src.x); ++k) steps.push_back({dst.x > src.x ? 1 : -1, 0});
      for (int k = 0; k < std::abs(dst.y - src.y); ++k) steps.push_back({0, dst.y > src.y ? 1 : -1});
      std::shuffle(steps.begin(), steps.end(), rng);
      Path path{src};
      for (Coord s : steps) path.push_back(Coord{path.back().x + s.x, path.back().y + s.y});
      state.apply_route(key, path, rng() % 501);
    }
  }
  MapRequest req;
  req.task = TaskRef{1000, 0};
  req.kind = rng() % 4 == 0 ? TaskKind::Hardware : TaskKind::Software;
  req.requester = hosts_any[rng() % occupied];
  req.vms = rng() % 201;
  req.vsm = rng() % 201;
  if (req.vms + req.vsm == 0) req.vms = 1;
  return RandomCase{std::move(state), req};
}

EnergyBreakdown recompute_energy(const std::vector<EventRecord>& events,
                                 const PlatformParams& params) {
  EnergyBreakdown e;
  for (const auto& ev : events) {
    if (ev.kind == EventKind::ComputeEnd) {
      const std::uint64_t rate = *ev.tile_kind == TileKind::RA ? params.ra_energy_per_instruction
                                                               : params.isp_energy_per_instruction;
      e.compute += ev.instructions * rate;
    } else if (ev.kind == EventKind::CommEnd) {
      e.comm += ev.volume * ev.hops * params.energy_per_packet_hop;
    }
  }
  return e;
}

std::size_t max_clusters_from_log(const std::vector<EventRecord>& events) {
  std::set<int> held;
  std::size_t worst = 0;
  for (const auto& ev : events) {
    if (ev.cluster < 0) continue;
    if (ev.kind == EventKind::AppAdmit) {
      held.insert(ev.cluster);
      worst = std::max(worst, held.size());
    } else if (ev.kind == EventKind::AppDone) {
      held.erase(ev.cluster);
    }
  }
  return worst;
}

std::uint64_t critical_path_lower_bound(const TaskGraph& graph, const PlatformParams& params) {
  const auto fastest = [&](const Task& t) {
    return t.kind == TaskKind::Hardware ? t.instructions * params.ra_cycles_per_instruction
                                        : t.instructions * params.isp_cycles_per_instruction;
  };
  // Longest path by memoised DFS from the root; graphs are small.
  std::map<std::size_t, std::uint64_t> memo;
  auto longest = [&](auto&& self, std::size_t task) -> std::uint64_t {
    if (const auto it = memo.find(task); it != memo.end()) return it->second;
    std::uint64_t tail = 0;
    for (std::size_t e : graph.out_edges(task)) {
      const Edge& edge = graph.edges()[e];
      tail = std::max(tail, edge.vms + self(self, edge.slave));
    }
    return memo[task] = fastest(graph.task(task)) + tail;
  };
  return longest(longest, graph.root());
}

// --- suites ---------------------------------------------------------------------------

SuiteResult verify_routing(std::uint64_t seed, std::size_t ledgers) {
  SuiteResult result{"routing", 0, 0, {}};
  std::mt19937_64 rng(seed);
  for (int n : {2, 3, 4}) {
    const ArchGraph arch = ArchGraph::with_default_layout(n, n);
    for (std::size_t l = 0; l < ledgers; ++l) {
      const ChannelLoadLedger ledger = random_ledger(arch, rng, 500);
      for (std::size_t s = 0; s < arch.tile_count(); ++s) {
        for (std::size_t d = 0; d < arch.tile_count(); ++d) {
          const Coord src = arch.coord_of(s);
          const Coord dst = arch.coord_of(d);
          const Path fast = modified_dijkstra(arch, src, dst, ledger);
          const Path slow = route_oracle(arch, src, dst, ledger);
          ++result.checks;
          const bool valid = is_valid_path(arch, fast) && fast.front() == src && fast.back() == dst;
          if (!valid || objective(fast, ledger) != objective(slow, ledger)) {
            if (result.failures++ == 0) {
              std::ostringstream dump;
              dump << n << "x" << n << " " << show(src) << "->" << show(dst) << " dijkstra "
                   << show(fast) << " oracle " << show(slow) << " loads";
              for (auto v : ledger.slots()) dump << ' ' << v;
              result.counterexample = dump.str();
            }
          }
        }
      }
    }
  }
  return result;
}

SuiteResult verify_placement(std::uint64_t seed, std::size_t states) {
  SuiteResult result{"placement", 0, 0, {}};
  std::mt19937_64 rng(seed);
  const ArchGraph arch = ArchGraph::with_default_layout(4, 4);
  const HeuristicKind kinds[] = {HeuristicKind::PL, HeuristicKind::MMC, HeuristicKind::MAC,
                                 HeuristicKind::BN, HeuristicKind::NN, HeuristicKind::Spiral};
  for (HeuristicKind kind : kinds) {
    for (RoutePolicy policy : {RoutePolicy::XY, RoutePolicy::ModifiedDijkstra}) {
      for (std::size_t i = 0; i < states; ++i) {
        const RandomCase c = random_case(arch, rng);
        std::optional<Coord> got;
        switch (kind) {
          case HeuristicKind::PL: got = map_pl(c.request, c.state, policy).tile; break;
          case HeuristicKind::MMC: got = map_mmc(c.request, c.state, policy).tile; break;
          case HeuristicKind::MAC: got = map_mac(c.request, c.state, policy).tile; break;
          case HeuristicKind::BN: got = map_bn(c.request, c.state, policy).tile; break;
          case HeuristicKind::NN: got = map_nn(c.request, c.state).tile; break;
          default: got = map_spiral(c.request, c.state).tile; break;
        }
        const auto want = brute_force_place(kind, c.request, c.state, policy);
        ++result.checks;
        if (got != want && result.failures++ == 0) {
          std::ostringstream dump;
          dump << to_string(kind) << '/' << to_string(policy) << " requester "
               << show(*c.request.requester) << " kind " << to_string(c.request.kind) << " vms "
               << c.request.vms << " vsm " << c.request.vsm << " got "
               << (got ? show(*got) : "none") << " want " << (want ? show(*want) : "none")
               << " occupied";
          for (const auto& [task, tile] : c.state.placements()) dump << ' ' << show(tile);
          dump << " loads";
          for (auto v : c.state.ledger().slots()) dump << ' ' << v;
          result.counterexample = dump.str();
        }
      }
    }
  }
  return result;
}

SuiteResult verify_spiral() {
  SuiteResult result{"spiral", 0, 0, {}};
  const ArchGraph arch = ArchGraph::default_platform();
  for (std::size_t i = 0; i < arch.tile_count(); ++i) {
    const Coord center = arch.coord_of(i);
    std::vector<Coord> seen;
    for (int hop = 1; hop <= 7; ++hop) {
      for (Coord c : spiral_ring(arch, center, hop)) seen.push_back(c);
    }
    std::vector<Coord> expected;
    for (std::size_t j = 0; j < arch.tile_count(); ++j) {
      if (j != i) expected.push_back(arch.coord_of(j));
    }
    std::vector<Coord> sorted = seen;
    std::sort(sorted.begin(), sorted.end());
    std::sort(expected.begin(), expected.end());
    ++result.checks;
    if (sorted != expected && result.failures++ == 0) {
      result.counterexample = "center " + show(center) + " visited " + show(seen);
    }
  }
  return result;
}

SuiteResult verify_first_free() {
  SuiteResult result{"ff", 0, 0, {}};
  const ArchGraph arch = ArchGraph::default_platform();
  std::vector<Coord> isp;
  for (std::size_t i = 0; i < arch.tile_count(); ++i) {
    if (arch.kind(arch.coord_of(i)) == TileKind::ISP) isp.push_back(arch.coord_of(i));
  }
  auto fail = [&](const std::string& what) {
    if (result.failures++ == 0) result.counterexample = what;
  };

  // Release-free stream: every ISP exactly once, then failure.
  {
    MappingState state(arch);
    std::size_t cursor = 0;
    std::set<Coord> used;
    for (std::size_t i = 0; i <= isp.size(); ++i) {
      const MapRequest req{TaskRef{0, static_cast<int>(i)}, TaskKind::Software, arch.manager(), 1, 0};
      const FirstFreeResult r = map_ff(req, state, cursor);
      cursor = r.cursor;
      ++result.checks;
      if (i == isp.size()) {
        if (r.outcome.tile) fail("first-free assigned a tile on a full platform");
        break;
      }
      if (!r.outcome.tile || !used.insert(*r.outcome.tile).second) {
        fail("first-free repeated or failed at request " + std::to_string(i));
        break;
      }
      state.place(req.task, req.kind, *r.outcome.tile);
    }
  }

  // Interleaved releases: a tile is not reused before every ISP was handed out once
  // since the previous wrap.
  {
    MappingState state(arch);
    std::size_t cursor = 0;
    std::set<Coord> since_wrap;
    std::optional<TaskRef> held;
    for (std::size_t i = 0; i < 3 * isp.size(); ++i) {
      const MapRequest req{TaskRef{1, static_cast<int>(i)}, TaskKind::Software, arch.manager(), 1, 0};
      const FirstFreeResult r = map_ff(req, state, cursor);
      cursor = r.cursor;
      ++result.checks;
      if (!r.outcome.tile) {
        fail("first-free failed with free tiles available");
        break;
      }
      if (since_wrap.size() == isp.size()) since_wrap.clear();
      if (!since_wrap.insert(*r.outcome.tile).second) {
        fail("tile " + show(*r.outcome.tile) + " reused before the sweep completed");
        break;
      }
      if (*r.outcome.tile != isp[i % isp.size()]) {
        fail("request " + std::to_string(i) + " went to " + show(*r.outcome.tile) +
             " instead of " + show(isp[i % isp.size()]));
        break;
      }
      // Keep the previous task alive one step so releases interleave with requests.
      state.place(req.task, req.kind, *r.outcome.tile);
      if (held) state.unplace(*held);
      held = req.task;
    }
  }
  return result;
}

std::vector<std::string> suite_names() { return {"routing", "placement", "spiral", "ff"}; }

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "routing") return verify_routing(seed);
  if (name == "placement") return verify_placement(seed);
  if (name == "spiral") return verify_spiral();
  if (name == "ff") return verify_first_free();
  throw InputError("unknown suite '" + name + "'");
}

}  // namespace nocmap::oracle
