#pragma once

#include <vector>

#include "parkroute/mdp.hpp"
#include "parkroute/routing.hpp"

namespace parkroute {

/**
 * Shortest-path policy on the static (full-capacity) combined-weight graph,
 * used as the learner's initial policy and tie-break. The action does not
 * depend on the time step.
 */
struct DefaultPolicy {
  std::vector<ActionIndex> action;
  std::vector<bool> routable;
  /// omega(s): weight of the best route from s to the destination, excluding
  /// the weight of s itself. Zero at the destination, +inf where unroutable.
  std::vector<double> omega;

  ActionIndex at(StateId s) const { return action[s]; }

  /// States visited from `origin` until the destination (inclusive). Empty if
  /// the origin is unroutable.
  std::vector<StateId> route_from(const Fhmdp& mdp, StateId origin, StateId destination) const;
};

/// State-level graph: arc s -> s' with weight W_G(s') at full capacity.
WeightedGraph state_graph(const RoadMdp& road, const WeightModel& weights);

/// Unroutable states keep action 0 so the policy stays total.
DefaultPolicy default_policy(const RoadMdp& road, const WeightModel& weights);

}  // namespace parkroute
