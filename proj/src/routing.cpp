#include "parkroute/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "parkroute/errors.hpp"

namespace parkroute {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double slack(double value) { return 1e-9 * std::max(1.0, std::abs(value)); }

}  // namespace

double parking_term(double availability, double max_length, double max_capacity) {
  if (!(max_capacity > 0.0)) {
    throw ConfigError("parking term undefined: network has no parking capacity");
  }
  return -availability * max_length / max_capacity;
}

WeightModel::WeightModel(double alpha, double max_length, double max_capacity)
    : alpha_(alpha), max_length_(max_length), max_capacity_(max_capacity) {
  if (!(max_capacity > 0.0)) {
    throw ConfigError("parking term undefined: network has no parking capacity");
  }
  if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must lie in [0, 1]");
}

WeightModel WeightModel::for_network(const RoadNetwork& net, double alpha) {
  return WeightModel(alpha, net.max_length(), static_cast<double>(net.max_capacity()));
}

WeightedGraph static_weights(const RoadNetwork& net, double alpha) {
  const WeightModel model = WeightModel::for_network(net, alpha);
  WeightedGraph g;
  g.node_count = net.node_count();
  g.arcs.reserve(net.edge_count());
  for (const RoadEdge& e : net.edges()) {
    g.arcs.push_back(WeightedArc{e.tail, e.head, model.weight(e.length_m, e.capacity), e.id});
  }
  return g;
}

WeightedGraph static_graph(const RoadNetwork& net, double alpha) {
  WeightedGraph g = static_weights(net, alpha);
  if (has_negative_cycle(g)) {
    throw InfeasibleAlpha("alpha " + std::to_string(alpha) +
                          " is below alpha_min: the static graph has a negative cycle");
  }
  return g;
}

bool has_negative_cycle(const WeightedGraph& graph) {
  std::vector<double> dist(graph.node_count, 0.0);
  for (std::size_t round = 0; round <= graph.node_count; ++round) {
    bool changed = false;
    for (const WeightedArc& a : graph.arcs) {
      const double candidate = dist[a.tail] + a.weight;
      if (candidate < dist[a.head] - slack(candidate)) {
        dist[a.head] = candidate;
        changed = true;
      }
    }
    if (!changed) return false;
  }
  return true;
}

double find_alpha_min(const RoadNetwork& net, double grid_step) {
  if (!(grid_step > 0.0 && grid_step < 1.0)) throw ConfigError("grid step must lie in (0, 1)");
  const auto steps = static_cast<std::size_t>(std::llround(1.0 / grid_step));
  auto alpha_at = [&](std::size_t k) { return std::min(1.0, static_cast<double>(k) * grid_step); };
  auto feasible = [&](std::size_t k) { return !has_negative_cycle(static_weights(net, alpha_at(k))); };
  if (!feasible(steps)) throw ConfigError("no feasible alpha <= 1");
  std::size_t lo = 0;
  std::size_t hi = steps;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return alpha_at(lo);
}

bool RouteTree::reachable(std::size_t node) const { return std::isfinite(cost.at(node)); }

RouteTree shortest_routes_to(const WeightedGraph& graph, std::size_t destination) {
  const std::size_t n = graph.node_count;
  if (destination >= n) throw ConfigError("destination outside graph");
  RouteTree tree;
  tree.destination = destination;
  tree.cost.assign(n, kInf);
  tree.next_arc.assign(n, std::nullopt);
  tree.cost[destination] = 0.0;

  for (std::size_t round = 0; round < n; ++round) {
    bool changed = false;
    for (const WeightedArc& a : graph.arcs) {
      if (a.tail == destination || !std::isfinite(tree.cost[a.head])) continue;
      const double candidate = tree.cost[a.head] + a.weight;
      if (candidate < tree.cost[a.tail] - slack(candidate)) {
        tree.cost[a.tail] = candidate;
        changed = true;
      }
    }
    if (!changed) break;
  }

  // Outgoing arcs per node, lowest key first.
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t i = 0; i < graph.arcs.size(); ++i) out[graph.arcs[i].tail].push_back(i);
  for (auto& arcs : out) {
    std::stable_sort(arcs.begin(), arcs.end(), [&](std::size_t x, std::size_t y) {
      return graph.arcs[x].key < graph.arcs[y].key;
    });
  }

  // 0 = unresolved, 1 = on the current search path, 2 = resolved.
  std::vector<unsigned char> mark(n, 0);
  mark[destination] = 2;
  auto resolve = [&](auto&& self, std::size_t u) -> bool {
    if (mark[u] == 2) return true;
    if (mark[u] == 1) return false;
    mark[u] = 1;
    for (std::size_t i : out[u]) {
      const WeightedArc& a = graph.arcs[i];
      if (!std::isfinite(tree.cost[a.head])) continue;
      const double through = tree.cost[a.head] + a.weight;
      if (std::abs(through - tree.cost[u]) > 1e2 * slack(tree.cost[u])) continue;
      if (self(self, a.head)) {
        tree.next_arc[u] = i;
        mark[u] = 2;
        return true;
      }
    }
    mark[u] = 0;
    return false;
  };
  for (std::size_t u = 0; u < n; ++u) {
    if (u != destination && std::isfinite(tree.cost[u])) resolve(resolve, u);
  }
  return tree;
}

}  // namespace parkroute
