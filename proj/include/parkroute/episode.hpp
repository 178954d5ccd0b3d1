#pragma once

#include <vector>

#include "parkroute/default_policy.hpp"
#include "parkroute/learner.hpp"
#include "parkroute/reward.hpp"

namespace parkroute {

/// Where tokens start an episode: a fixed list, or M distinct uniform states.
struct OriginSpec {
  enum class Mode { Fixed, UniformDistinct };
  Mode mode = Mode::Fixed;
  std::vector<StateId> fixed;

  static OriginSpec fixed_states(std::vector<StateId> states) {
    return OriginSpec{Mode::Fixed, std::move(states)};
  }
  static OriginSpec uniform_distinct() { return OriginSpec{Mode::UniformDistinct, {}}; }
};

/// `count` distinct states drawn uniformly from [0, states).
std::vector<StateId> sample_distinct_states(std::size_t states, std::size_t count, Rng& rng);

struct RouteMetrics {
  double total_weight = 0.0;
  double distance_m = 0.0;
  double availability = 0.0;
};

/// Sums W_G at observed availability, length, and availability over `route`.
RouteMetrics measure_route(const RoadMdp& road, const WeightModel& weights,
                           std::span<const StateId> route, std::span<const double> availability);

struct Rollout {
  /// Visited states from the origin, cut at the first arrival at the destination.
  std::vector<StateId> route;
  bool reached = false;
};

/// Follows a policy for at most H steps.
Rollout roll_out(const Policy& policy, const RoadMdp& road, StateId origin);

struct TokenTrip {
  std::size_t token = 0;
  StateId origin = 0;
  std::vector<StateId> route;
  std::vector<double> rewards;
  bool reached = false;
  /// A reward query hit a state with no route to the destination.
  bool routing_failed = false;
  RouteMetrics metrics;
};

/**
 * Executes the current policy for every token over H steps, feeding each
 * transition reward to the learner as soon as it is observed. Tokens run in
 * index order. Transitions out of unroutable states are still recorded, with
 * zero reward, and mark the trip as failed.
 */
std::vector<TokenTrip> run_episode(MubevLearner& learner, const RoadMdp& road,
                                   const DefaultPolicy& defaults, const RewardFunction& reward,
                                   std::span<const double> availability, const OriginSpec& origins,
                                   Rng& rng);

}  // namespace parkroute
