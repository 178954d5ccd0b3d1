#pragma once

#include <span>
#include <vector>

#include "parkroute/default_policy.hpp"
#include "parkroute/routing.hpp"

namespace parkroute {

struct RewardConfig {
  double alpha = 0.66;
  /// Scale when the taken move is the default move.
  double beta_default = 20.0;
  /// Scale when the taken move deviates from the default.
  double beta_alternative = 20.0;
  double r_max = 1.0;
};

/// Observed available spaces per state for the current episode.
using AvailabilitySnapshot = std::vector<double>;

/// Static route weights to the destination, one per state of `graph`.
std::vector<double> omega_table(const WeightedGraph& graph, std::size_t destination);

/// 1 - taken / reference. Both are total route weights through the candidate
/// next states.
inline double route_ratio_reward(double taken_route, double reference_route) {
  return 1.0 - taken_route / reference_route;
}

/**
 * Two-objective transition reward. Compares the state actually entered with
 * the state the default action would have entered: the default successor is
 * weighted at full capacity, the taken successor at its observed
 * availability. Equal weights mean nothing unexpected happened and pay r_max;
 * otherwise the reward is the scaled relative excess of the taken route.
 */
class RewardFunction {
 public:
  RewardFunction(const RoadMdp& road, std::vector<double> omega, RewardConfig config);

  /// The reward rule for s -> next, with `default_next` the default successor.
  /// Throws RoutingError if either successor has no route, ConfigError if the
  /// reference route weight is not positive.
  double evaluate(StateId s, StateId next, StateId default_next,
                  std::span<const double> availability) const;

  /// Reward granted to the learner: r_max on the destination self-loop, zero
  /// on a dead-end self-loop, `evaluate` otherwise.
  double transition(StateId s, StateId next, StateId default_next,
                    std::span<const double> availability) const;

  /// Throws ConfigError unless every routable non-destination state has a
  /// positive route weight, which keeps the uncertainty branch sign-correct.
  void validate() const;

  const RewardConfig& config() const { return config_; }
  const WeightModel& weights() const { return weights_; }
  const std::vector<double>& omega() const { return omega_; }

 private:
  const RoadMdp* road_;
  std::vector<double> omega_;
  RewardConfig config_;
  WeightModel weights_;
};

}  // namespace parkroute
