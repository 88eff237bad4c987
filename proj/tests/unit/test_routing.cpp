#include <gtest/gtest.h>

#include <random>

#include "nocmap/errors.hpp"
#include "nocmap/oracle.hpp"
#include "nocmap/routing.hpp"

using namespace nocmap;

namespace {

std::uint64_t sum_by_hand(const Path& p, const ChannelLoadLedger& l) {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) s += l.load(p[i], p[i + 1]);
  return s;
}

}  // namespace

TEST(XyRoute, Examples) {
  const ArchGraph a = ArchGraph::default_platform();
  EXPECT_EQ(xy_route(a, {1, 1}, {3, 2}), (Path{{1, 1}, {2, 1}, {3, 1}, {3, 2}}));
  EXPECT_EQ(xy_route(a, {5, 5}, {5, 5}), (Path{{5, 5}}));
  EXPECT_EQ(xy_route(a, {3, 2}, {1, 1}), (Path{{3, 2}, {2, 2}, {1, 2}, {1, 1}}));
  EXPECT_THROW((void)xy_route(a, {0, 0}, {9, 9}), InputError);
}

TEST(XyRoute, HopsEqualHopDistance) {
  const ArchGraph a = ArchGraph::default_platform();
  for (std::size_t i = 0; i < a.tile_count(); ++i) {
    for (std::size_t j = 0; j < a.tile_count(); ++j) {
      const Path p = xy_route(a, a.coord_of(i), a.coord_of(j));
      ASSERT_TRUE(is_valid_path(a, p));
      ASSERT_EQ(static_cast<int>(p.size()) - 1, hop_distance(a, a.coord_of(i), a.coord_of(j)));
    }
  }
}

TEST(PathCost, Examples) {
  const ArchGraph a = ArchGraph::with_default_layout(4, 1);
  ChannelLoadLedger l(a);
  const Path p{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  EXPECT_EQ(path_cost(p, l), 0u);
  l.add({0, 0}, {1, 0}, 100);
  l.add({2, 0}, {3, 0}, 50);
  l.add({1, 0}, {0, 0}, 999);  // opposite direction does not count
  EXPECT_EQ(path_cost(p, l), 150u);
  EXPECT_EQ(objective(p, l), (PathObjective{150, 3}));
}

TEST(PathCost, XyCostMatchesManualSum) {
  std::mt19937_64 rng(3);
  const ArchGraph a = ArchGraph::default_platform();
  for (int k = 0; k < 20; ++k) {
    const ChannelLoadLedger l = oracle::random_ledger(a, rng, 500);
    for (int t = 0; t < 50; ++t) {
      const Coord s = a.coord_of(rng() % 64);
      const Coord d = a.coord_of(rng() % 64);
      const Path p = xy_route(a, s, d);
      ASSERT_EQ(path_cost(p, l), sum_by_hand(p, l));
    }
  }
}

TEST(ModifiedDijkstra, ZeroLoadIsStraight) {
  const ArchGraph a = ArchGraph::default_platform();
  const ChannelLoadLedger l(a);
  EXPECT_EQ(modified_dijkstra(a, {0, 0}, {2, 0}, l), (Path{{0, 0}, {1, 0}, {2, 0}}));
  EXPECT_EQ(modified_dijkstra(a, {5, 5}, {5, 5}, l), (Path{{5, 5}}));
}

TEST(ModifiedDijkstra, DetoursAroundLoadedLink) {
  const ArchGraph a = ArchGraph::with_default_layout(3, 3);
  ChannelLoadLedger l(a);
  l.add({1, 0}, {2, 0}, 500);
  const Path p = modified_dijkstra(a, {0, 0}, {2, 0}, l);
  EXPECT_EQ(p, (Path{{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 0}}));
  EXPECT_EQ(objective(p, l), (PathObjective{0, 4}));

  // Enumerate every simple path by hand and confirm the optimum.
  std::optional<PathObjective> best;
  std::vector<Coord> stack{{0, 0}};
  auto dfs = [&](auto&& self) -> void {
    if (stack.back() == Coord{2, 0}) {
      const auto o = objective(stack, l);
      if (!best || o < *best) best = o;
      return;
    }
    for (Coord n : a.neighbors(stack.back())) {
      if (std::find(stack.begin(), stack.end(), n) != stack.end()) continue;
      stack.push_back(n);
      self(self);
      stack.pop_back();
    }
  };
  dfs(dfs);
  EXPECT_EQ(*best, (PathObjective{0, 4}));
}

TEST(ModifiedDijkstra, PrefersCheapOverShort) {
  const ArchGraph a = ArchGraph::with_default_layout(4, 4);
  ChannelLoadLedger l(a);
  l.add({0, 0}, {1, 0}, 10);
  // Only the first link of the straight route is loaded; every detour pays nothing.
  const Path p = modified_dijkstra(a, {0, 0}, {1, 0}, l);
  EXPECT_EQ(objective(p, l), (PathObjective{0, 3}));
  EXPECT_EQ(p, (Path{{0, 0}, {0, 1}, {1, 1}, {1, 0}}));
}

TEST(ModifiedDijkstra, MatchesOracleOnRandomLedgers) {
  std::mt19937_64 rng(99);
  for (int n : {2, 3, 4}) {
    const ArchGraph a = ArchGraph::with_default_layout(n, n);
    for (int k = 0; k < 15; ++k) {
      const ChannelLoadLedger l = oracle::random_ledger(a, rng, 500);
      for (std::size_t s = 0; s < a.tile_count(); ++s) {
        for (std::size_t d = 0; d < a.tile_count(); ++d) {
          const Path fast = modified_dijkstra(a, a.coord_of(s), a.coord_of(d), l);
          const Path slow = route_oracle(a, a.coord_of(s), a.coord_of(d), l);
          ASSERT_TRUE(is_valid_path(a, fast));
          ASSERT_EQ(objective(fast, l), objective(slow, l));
          // Same tie-break too, so the paths coincide.
          ASSERT_EQ(fast, slow);
        }
      }
    }
  }
}

TEST(ModifiedDijkstra, SparseLoadsProduceTiesHandledIdentically) {
  // Few loaded links, small values: many equal-cost paths.
  std::mt19937_64 rng(5);
  const ArchGraph a = ArchGraph::with_default_layout(4, 4);
  for (int k = 0; k < 30; ++k) {
    ChannelLoadLedger l(a);
    for (int j = 0; j < 5; ++j) {
      const Coord c = a.coord_of(rng() % 16);
      const auto ns = a.neighbors(c);
      l.add(c, ns[rng() % ns.size()], rng() % 3);
    }
    for (std::size_t s = 0; s < 16; ++s) {
      for (std::size_t d = 0; d < 16; ++d) {
        ASSERT_EQ(modified_dijkstra(a, a.coord_of(s), a.coord_of(d), l),
                  route_oracle(a, a.coord_of(s), a.coord_of(d), l));
      }
    }
  }
}

TEST(ModifiedDijkstra, MonotoneInAddedLoad) {
  std::mt19937_64 rng(17);
  const ArchGraph a = ArchGraph::default_platform();
  for (int k = 0; k < 30; ++k) {
    ChannelLoadLedger l = oracle::random_ledger(a, rng, 50);
    const Coord s = a.coord_of(rng() % 64);
    const Coord d = a.coord_of(rng() % 64);
    const auto before = path_cost(modified_dijkstra(a, s, d, l), l);
    const Coord c = a.coord_of(rng() % 64);
    l.add(c, a.neighbors(c).front(), 1 + rng() % 100);
    EXPECT_GE(path_cost(modified_dijkstra(a, s, d, l), l), before);
  }
}

TEST(ModifiedDijkstra, Deterministic) {
  std::mt19937_64 rng(1);
  const ArchGraph a = ArchGraph::default_platform();
  const ChannelLoadLedger l = oracle::random_ledger(a, rng, 5);
  EXPECT_EQ(modified_dijkstra(a, {0, 7}, {7, 0}, l), modified_dijkstra(a, {0, 7}, {7, 0}, l));
}

TEST(RouteOracle, Basics) {
  const ArchGraph row = ArchGraph::with_default_layout(4, 1);
  ChannelLoadLedger l(row);
  l.add({1, 0}, {2, 0}, 400);
  EXPECT_EQ(route_oracle(row, {0, 0}, {3, 0}, l), (Path{{0, 0}, {1, 0}, {2, 0}, {3, 0}}));

  const ArchGraph sq = ArchGraph::with_default_layout(3, 3);
  const ChannelLoadLedger zero(sq);
  EXPECT_EQ(route_oracle(sq, {0, 0}, {2, 2}, zero).size(), 5u);

  const ArchGraph big = ArchGraph::with_default_layout(5, 4);
  EXPECT_THROW((void)route_oracle(big, {0, 0}, {1, 1}, ChannelLoadLedger(big)), InputError);
}

TEST(RoutePolicy, Names) {
  EXPECT_EQ(parse_route_policy("xy"), RoutePolicy::XY);
  EXPECT_EQ(parse_route_policy("mdijkstra"), RoutePolicy::ModifiedDijkstra);
  EXPECT_FALSE(parse_route_policy("dijkstra"));
  EXPECT_EQ(to_string(RoutePolicy::ModifiedDijkstra), "mdijkstra");
}
