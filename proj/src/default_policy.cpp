#include "parkroute/default_policy.hpp"

#include <algorithm>
#include <limits>

namespace parkroute {

WeightedGraph state_graph(const RoadMdp& road, const WeightModel& weights) {
  WeightedGraph g;
  g.node_count = road.mdp.state_count();
  for (StateId s = 0; s < g.node_count; ++s) {
    for (StateId next : road.mdp.successors(s)) {
      if (next == s) continue;
      g.arcs.push_back(WeightedArc{s, next, weights.weight(road.length(next), road.capacity(next)),
                                   road.states.edge(next).id});
    }
  }
  return g;
}

DefaultPolicy default_policy(const RoadMdp& road, const WeightModel& weights) {
  const WeightedGraph g = state_graph(road, weights);
  const RouteTree tree = shortest_routes_to(g, road.destination);
  const std::size_t S = road.mdp.state_count();
  DefaultPolicy dp;
  dp.action.assign(S, 0);
  dp.routable.assign(S, false);
  dp.omega = tree.cost;
  for (StateId s = 0; s < S; ++s) {
    if (s == road.destination) {
      dp.routable[s] = true;
      continue;
    }
    if (!tree.next_arc[s]) continue;
    const StateId next = g.arcs[*tree.next_arc[s]].head;
    const auto succ = road.mdp.successors(s);
    dp.action[s] = static_cast<ActionIndex>(std::find(succ.begin(), succ.end(), next) - succ.begin());
    dp.routable[s] = true;
  }
  return dp;
}

std::vector<StateId> DefaultPolicy::route_from(const Fhmdp& mdp, StateId origin,
                                               StateId destination) const {
  std::vector<StateId> route;
  if (!routable[origin]) return route;
  StateId s = origin;
  route.push_back(s);
  while (s != destination && route.size() <= mdp.state_count()) {
    s = mdp.successor(s, action[s]);
    route.push_back(s);
  }
  return route;
}

}  // namespace parkroute
