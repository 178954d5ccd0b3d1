#include "parkroute/episode.hpp"

#include <numeric>

#include "parkroute/errors.hpp"

namespace parkroute {

std::vector<StateId> sample_distinct_states(std::size_t states, std::size_t count, Rng& rng) {
  if (count > states) throw ConfigError("cannot draw more distinct origins than states");
  std::vector<StateId> pool(states);
  std::iota(pool.begin(), pool.end(), StateId{0});
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, states - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(count);
  return pool;
}

RouteMetrics measure_route(const RoadMdp& road, const WeightModel& weights,
                           std::span<const StateId> route, std::span<const double> availability) {
  RouteMetrics m;
  for (StateId s : route) {
    m.total_weight += weights.weight(road.length(s), availability[s]);
    m.distance_m += road.length(s);
    m.availability += availability[s];
  }
  return m;
}

Rollout roll_out(const Policy& policy, const RoadMdp& road, StateId origin) {
  Rollout out;
  StateId s = origin;
  out.route.push_back(s);
  out.reached = s == road.destination;
  for (std::size_t t = 0; t < road.mdp.horizon() && !out.reached; ++t) {
    s = road.mdp.successor(s, policy.at(s, t));
    out.route.push_back(s);
    out.reached = s == road.destination;
  }
  return out;
}

std::vector<TokenTrip> run_episode(MubevLearner& learner, const RoadMdp& road,
                                   const DefaultPolicy& defaults, const RewardFunction& reward,
                                   std::span<const double> availability, const OriginSpec& origins,
                                   Rng& rng) {
  const Fhmdp& mdp = road.mdp;
  const std::size_t M = learner.config().tokens;
  std::vector<StateId> starts;
  if (origins.mode == OriginSpec::Mode::Fixed) {
    if (origins.fixed.size() != M) throw ConfigError("fixed origin list must name one state per token");
    starts = origins.fixed;
  } else {
    starts = sample_distinct_states(mdp.state_count(), M, rng);
  }

  std::vector<TokenTrip> trips;
  trips.reserve(M);
  const Policy& policy = learner.policy();
  for (std::size_t m = 0; m < M; ++m) {
    TokenTrip trip;
    trip.token = m;
    trip.origin = starts[m];
    StateId s = starts[m];
    trip.route.push_back(s);
    trip.reached = s == road.destination;
    for (std::size_t t = 0; t < mdp.horizon(); ++t) {
      const ActionIndex a = policy.at(s, t);
      const StateId next = mdp.successor(s, a);
      // Without a default route the default move falls back to the taken one.
      const StateId default_next = defaults.routable[s] ? mdp.successor(s, defaults.at(s)) : next;
      double r = 0.0;
      try {
        r = reward.transition(s, next, default_next, availability);
      } catch (const RoutingError&) {
        trip.routing_failed = true;
      }
      learner.record_transition(s, a, r);
      trip.rewards.push_back(r);
      s = next;
      if (!trip.reached) {
        trip.route.push_back(s);
        trip.reached = s == road.destination;
      }
    }
    trip.metrics = measure_route(road, reward.weights(), trip.route, availability);
    trips.push_back(std::move(trip));
  }
  return trips;
}

}  // namespace parkroute
