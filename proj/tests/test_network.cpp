#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "parkroute/errors.hpp"
#include "parkroute/network.hpp"
#include "parkroute/routing.hpp"

using namespace parkroute;

namespace {

RoadNetwork two_way(double length, std::uint32_t cap_ab, std::uint32_t cap_ba) {
  return RoadNetwork({"a", "b"}, {{1, 0, 1, length, cap_ab}, {2, 1, 0, length, cap_ba}});
}

}  // namespace

TEST(ParkingTerm, ZeroAvailabilityContributesNothing) { EXPECT_EQ(parking_term(0, 200, 10), 0.0); }

TEST(ParkingTerm, HalfCapacity) { EXPECT_DOUBLE_EQ(parking_term(5, 200, 10), -100.0); }

TEST(ParkingTerm, FullCapacityCancels) { EXPECT_DOUBLE_EQ(parking_term(10, 200, 10), -200.0); }

TEST(ParkingTerm, NoCapacityAnywhereIsAnError) { EXPECT_THROW(parking_term(0, 100, 0), ConfigError); }

TEST(CombinedWeight, Examples) {
  EXPECT_EQ(combined_weight(1.0, 137, -50), 137.0);
  EXPECT_NEAR(combined_weight(0.66, 100, -100), 32.0, 1e-12);
  EXPECT_NEAR(combined_weight(0.66, 100, 0), 66.0, 1e-12);
}

TEST(CombinedWeight, MonotoneInLengthAndAvailability) {
  const WeightModel m(0.7, 150, 12);
  for (double nu = 0; nu < 12; nu += 1) {
    EXPECT_LE(m.weight(100, nu + 1), m.weight(100, nu));
    EXPECT_LE(m.weight(100, nu), m.weight(101, nu));
    // Full capacity is the most optimistic weight.
    EXPECT_LE(m.weight(100, 12), m.weight(100, nu));
  }
}

TEST(RoadNetwork, DerivedMaxima) {
  RoadNetwork net({"a", "b", "c"}, {{5, 0, 1, 80, 3}, {6, 1, 2, 200, 7}, {7, 2, 0, 50, 0}});
  EXPECT_EQ(net.max_length(), 200.0);
  EXPECT_EQ(net.max_capacity(), 7u);
  EXPECT_EQ(net.edge_index(6), 1u);
  EXPECT_FALSE(net.find_edge(99).has_value());
}

TEST(RoadNetwork, RejectsInvalidInput) {
  EXPECT_THROW(RoadNetwork({"a", "b"}, {{1, 0, 1, 0.0, 1}}), ConfigError);
  EXPECT_THROW(RoadNetwork({"a", "b"}, {{1, 0, 0, 10, 1}}), ConfigError);
  EXPECT_THROW(RoadNetwork({"a", "b"}, {{1, 0, 1, 10, 0}}), ConfigError);
  EXPECT_THROW(RoadNetwork({"a", "b"}, {{1, 0, 1, 10, 1}, {1, 1, 0, 10, 1}}), ConfigError);
  EXPECT_THROW(RoadNetwork({"a", "a"}, {{1, 0, 1, 10, 1}}), ConfigError);
  EXPECT_THROW(RoadNetwork({"a", "b"}, {}), ConfigError);
}

TEST(RoadNetwork, ParallelEdgesAllowed) {
  RoadNetwork net({"a", "b"}, {{1, 0, 1, 10, 1}, {2, 0, 1, 20, 1}});
  EXPECT_EQ(net.out_edges(0).size(), 2u);
}

TEST(EdgeList, RoundTripWithComments) {
  std::istringstream in("# header\nedge_id,tail,head,length_m,capacity\n1,x,y,100.5,3\n\n2,y,x,20,0\n");
  const RoadNetwork net = read_edge_list(in);
  ASSERT_EQ(net.edge_count(), 2u);
  EXPECT_EQ(net.edge(0).length_m, 100.5);
  std::ostringstream out;
  write_edge_list(net, out);
  std::istringstream again(out.str());
  const RoadNetwork back = read_edge_list(again);
  ASSERT_EQ(back.edge_count(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back.edge(i).id, net.edge(i).id);
    EXPECT_EQ(back.node_name(back.edge(i).tail), net.node_name(net.edge(i).tail));
    EXPECT_EQ(back.edge(i).length_m, net.edge(i).length_m);
    EXPECT_EQ(back.edge(i).capacity, net.edge(i).capacity);
  }
}

TEST(EdgeList, MalformedLineReportsError) {
  std::istringstream in("1,x,y,abc,3\n");
  EXPECT_THROW(read_edge_list(in), ConfigError);
}

TEST(Grid, DefaultSizeAndCapacities) {
  const RoadNetwork net = make_grid(GridSpec{});
  EXPECT_EQ(net.node_count(), 64u);
  EXPECT_EQ(net.edge_count(), 224u);
  for (const RoadEdge& e : net.edges()) {
    EXPECT_EQ(e.length_m, 100.0);
    EXPECT_TRUE(e.capacity == 0 || e.capacity == 5 || e.capacity == 10);
  }
}

TEST(Grid, SeedDeterminesCapacities) {
  GridSpec a, b, c;
  c.seed = 2;
  const RoadNetwork na = make_grid(a), nb = make_grid(b), nc = make_grid(c);
  bool differs = false;
  for (std::size_t i = 0; i < na.edge_count(); ++i) {
    EXPECT_EQ(na.edge(i).capacity, nb.edge(i).capacity);
    differs |= na.edge(i).capacity != nc.edge(i).capacity;
  }
  EXPECT_TRUE(differs);
}

TEST(StaticGraph, WeightsAtFullCapacity) {
  const RoadNetwork net({"a", "b"}, {{1, 0, 1, 100, 10}});
  const WeightedGraph g = static_graph(net, 0.66);
  ASSERT_EQ(g.arcs.size(), 1u);
  EXPECT_NEAR(g.arcs[0].weight, 32.0, 1e-12);
  const WeightedGraph pure = static_graph(net, 1.0);
  EXPECT_EQ(pure.arcs[0].weight, 100.0);
}

TEST(StaticGraph, BelowAlphaMinIsRejected) {
  const RoadNetwork net = two_way(100, 10, 10);
  EXPECT_EQ(find_alpha_min(net), 0.5);
  EXPECT_THROW(static_graph(net, 0.49), InfeasibleAlpha);
  EXPECT_NO_THROW(static_graph(net, 0.5));
}

TEST(NegativeCycle, Examples) {
  EXPECT_FALSE(has_negative_cycle({2, {{0, 1, 5.0, 0}}}));
  EXPECT_TRUE(has_negative_cycle({2, {{0, 1, 1.0, 0}, {1, 0, -2.0, 1}}}));
  EXPECT_FALSE(has_negative_cycle({2, {{0, 1, 1.0, 0}, {1, 0, -1.0, 1}}}));
}

TEST(AlphaMin, AcyclicNetworkIsZero) {
  const RoadNetwork net({"a", "b", "c"}, {{1, 0, 1, 100, 10}, {2, 1, 2, 100, 10}});
  EXPECT_EQ(find_alpha_min(net), 0.0);
}

TEST(AlphaMin, ResultIsTheGridBoundary) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GridSpec spec;
    spec.rows = 3 + seed % 4;
    spec.cols = 3 + (seed / 3) % 4;
    spec.seed = seed;
    const RoadNetwork net = make_grid(spec);
    const double a = find_alpha_min(net);
    EXPECT_FALSE(has_negative_cycle(static_weights(net, a))) << seed;
    if (a > 0.0) EXPECT_TRUE(has_negative_cycle(static_weights(net, a - 0.01))) << seed;
    EXPECT_FALSE(has_negative_cycle(static_weights(net, 1.0)));
  }
}

TEST(Routes, MatchExhaustivePathSearchOnSmallNetworks) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 4 + trial % 3;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("n" + std::to_string(i));
    std::vector<RoadEdge> edges;
    std::uniform_int_distribution<int> len(20, 200), cap(0, 10);
    EdgeId id = 0;
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < n; ++v) {
        if (u != v && rng() % 2) edges.push_back({id++, u, v, static_cast<double>(len(rng)),
                                                  static_cast<std::uint32_t>(cap(rng))});
      }
    }
    if (edges.empty()) continue;
    edges.front().capacity = 10;
    const RoadNetwork net(names, edges);
    const double alpha = std::max(0.66, find_alpha_min(net));
    const WeightedGraph g = static_graph(net, alpha);
    const RouteTree tree = shortest_routes_to(g, 0);
    std::vector<oracle::Arc> arcs;
    for (const WeightedArc& a : g.arcs) arcs.push_back({a.tail, a.head, a.weight});
    for (std::size_t u = 1; u < n; ++u) {
      const double want = oracle::best_simple_path(n, arcs, u, 0);
      if (std::isinf(want)) {
        EXPECT_FALSE(tree.reachable(u));
      } else {
        EXPECT_NEAR(tree.cost[u], want, 1e-9);
        // Following next hops reproduces the cost.
        double acc = 0.0;
        std::size_t v = u;
        for (std::size_t hops = 0; v != 0 && hops <= n; ++hops) {
          const WeightedArc& a = g.arcs[*tree.next_arc[v]];
          acc += a.weight;
          v = a.head;
        }
        EXPECT_EQ(v, 0u);
        EXPECT_NEAR(acc, want, 1e-9);
      }
    }
  }
}

TEST(Routes, TiesGoToLowestKey) {
  // Two equal routes a->b->d and a->c->d; the arc with key 3 is preferred over key 5.
  const WeightedGraph g{4, {{0, 1, 1.0, 5}, {0, 2, 1.0, 3}, {1, 3, 1.0, 0}, {2, 3, 1.0, 1}}};
  const RouteTree t = shortest_routes_to(g, 3);
  EXPECT_EQ(g.arcs[*t.next_arc[0]].key, 3);
}

TEST(Routes, ZeroWeightCycleTieStillReachesDestination) {
  // a<->b costs nothing; the low-key arc from a leads into the cycle.
  const WeightedGraph g{3, {{0, 1, 0.0, 0}, {1, 0, 0.0, 1}, {0, 2, 1.0, 2}, {1, 2, 1.0, 3}}};
  const RouteTree t = shortest_routes_to(g, 2);
  for (std::size_t u : {0u, 1u}) {
    std::size_t v = u;
    for (int i = 0; i < 5 && v != 2; ++i) v = g.arcs[*t.next_arc[v]].head;
    EXPECT_EQ(v, 2u);
  }
}

TEST(MergeChains, SumsLengthAndCapacity) {
  // a -> b -> c, b has in- and out-degree 1.
  const RoadNetwork net({"a", "b", "c"}, {{10, 0, 1, 100, 3}, {11, 1, 2, 50, 4}});
  const MergedNetwork m = merge_chains(net);
  ASSERT_EQ(m.network.edge_count(), 1u);
  EXPECT_EQ(m.network.edge(0).id, 10);
  EXPECT_EQ(m.network.edge(0).length_m, 150.0);
  EXPECT_EQ(m.network.edge(0).capacity, 7u);
  EXPECT_EQ(m.constituents[0], (std::vector<EdgeId>{10, 11}));
}

TEST(MergeChains, KeepsBranchesAndProtectedEdges) {
  // b branches to c and d.
  const RoadNetwork net({"a", "b", "c", "d"}, {{1, 0, 1, 10, 1}, {2, 1, 2, 10, 1}, {3, 1, 3, 10, 1}});
  EXPECT_EQ(merge_chains(net).network.edge_count(), 3u);
  const RoadNetwork chain({"a", "b", "c"}, {{1, 0, 1, 10, 1}, {2, 1, 2, 10, 1}});
  const EdgeId keep[] = {2};
  EXPECT_EQ(merge_chains(chain, keep).network.edge_count(), 2u);
}

TEST(MergeChains, EveryMergedEdgeSumsItsConstituents) {
  // a->b->c->d is unbranched inside; d->a closes a loop and a->e branches off.
  const RoadNetwork net({"a", "b", "c", "d", "e"}, {{1, 0, 1, 30, 1},
                                                    {2, 1, 2, 40, 2},
                                                    {3, 2, 3, 50, 3},
                                                    {4, 3, 0, 60, 0},
                                                    {5, 0, 4, 70, 5}});
  const MergedNetwork m = merge_chains(net);
  EXPECT_LT(m.network.edge_count(), net.edge_count());
  std::size_t covered = 0;
  for (std::size_t i = 0; i < m.network.edge_count(); ++i) {
    double len = 0;
    std::uint32_t cap = 0;
    for (EdgeId id : m.constituents[i]) {
      len += net.edge(net.edge_index(id)).length_m;
      cap += net.edge(net.edge_index(id)).capacity;
      ++covered;
    }
    EXPECT_EQ(m.network.edge(i).length_m, len);
    EXPECT_EQ(m.network.edge(i).capacity, cap);
    EXPECT_EQ(m.network.edge(i).id, m.constituents[i].front());
  }
  EXPECT_EQ(covered, net.edge_count());
}
