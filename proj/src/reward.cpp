#include "parkroute/reward.hpp"

#include <cmath>

#include "parkroute/errors.hpp"

namespace parkroute {

std::vector<double> omega_table(const WeightedGraph& graph, std::size_t destination) {
  return shortest_routes_to(graph, destination).cost;
}

RewardFunction::RewardFunction(const RoadMdp& road, std::vector<double> omega, RewardConfig config)
    : road_(&road),
      omega_(std::move(omega)),
      config_(config),
      weights_(WeightModel::for_network(road.states, config.alpha)) {
  if (omega_.size() != road.mdp.state_count()) throw ConfigError("omega table size mismatch");
  if (!(config_.beta_default > 0.0) || !(config_.beta_alternative > 0.0)) {
    throw ConfigError("reward scales must be positive");
  }
}

double RewardFunction::evaluate(StateId s, StateId next, StateId default_next,
                                std::span<const double> availability) const {
  const double w_default = weights_.weight(road_->length(default_next), road_->capacity(default_next));
  const double w_taken = weights_.weight(road_->length(next), availability[next]);
  if (w_default == w_taken) return config_.r_max;

  if (!std::isfinite(omega_[next]) || !std::isfinite(omega_[default_next])) {
    throw RoutingError("no route to the destination from state " + std::to_string(next) +
                       " reached from " + std::to_string(s));
  }
  const double reference = omega_[default_next] + w_default;
  const double taken = omega_[next] + w_taken;
  if (!(reference > 0.0)) {
    throw ConfigError("non-positive reference route weight at state " + std::to_string(s));
  }
  const double base = route_ratio_reward(taken, reference);
  return next == default_next ? config_.beta_default * base : config_.beta_alternative * base;
}

double RewardFunction::transition(StateId s, StateId next, StateId default_next,
                                  std::span<const double> availability) const {
  switch (road_->kind[s]) {
    case StateKind::Destination:
      return config_.r_max;
    case StateKind::DeadEnd:
      return 0.0;
    case StateKind::Road:
      break;
  }
  return evaluate(s, next, default_next, availability);
}

void RewardFunction::validate() const {
  for (StateId s = 0; s < omega_.size(); ++s) {
    if (s == road_->destination || !std::isfinite(omega_[s])) continue;
    if (!(omega_[s] > 0.0)) {
      throw ConfigError("route weight from state " + std::to_string(s) + " is " +
                        std::to_string(omega_[s]) + "; alpha " + std::to_string(config_.alpha) +
                        " breaks the reward sign convention");
    }
  }
}

}  // namespace parkroute
