#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include "parkroute/network.hpp"

namespace parkroute {

using StateId = std::size_t;
using ActionIndex = std::size_t;

/**
 * Finite-horizon MDP with deterministic transitions: action `a` in state `s`
 * moves to `successor(s, a)` with probability one. Every state has at least
 * one action. Time steps are 0-based, `t = 0 .. horizon-1`.
 */
class Fhmdp {
 public:
  Fhmdp(std::vector<std::vector<StateId>> successors, std::size_t horizon);

  std::size_t state_count() const { return successors_.size(); }
  std::size_t horizon() const { return horizon_; }
  std::size_t action_count(StateId s) const { return successors_[s].size(); }
  std::size_t max_action_count() const { return max_actions_; }
  /// Sum of A_s over all states.
  std::size_t pair_count() const { return offsets_.back(); }
  StateId successor(StateId s, ActionIndex a) const { return successors_[s][a]; }
  std::span<const StateId> successors(StateId s) const { return successors_[s]; }
  /// Position of (s, 0) in flat per-pair tables.
  std::size_t offset(StateId s) const { return offsets_[s]; }

 private:
  std::vector<std::vector<StateId>> successors_;
  std::size_t horizon_;
  std::vector<std::size_t> offsets_;
  std::size_t max_actions_ = 0;
};

enum class StateKind { Road, Destination, DeadEnd };

/// MDP whose states are the (possibly merged) edges of a road network.
struct RoadMdp {
  /// Edge `s` of this network is state `s`.
  RoadNetwork states;
  /// Original edge ids making up each state.
  std::vector<std::vector<EdgeId>> constituents;
  Fhmdp mdp;
  StateId destination = 0;
  std::vector<StateKind> kind;
  std::unordered_map<EdgeId, StateId> state_by_edge;

  /// State containing the original edge `id`; throws ConfigError if unknown.
  StateId state_of(EdgeId id) const;
  double length(StateId s) const { return states.edge(s).length_m; }
  double capacity(StateId s) const { return states.edge(s).capacity; }
};

struct MdpOptions {
  std::size_t horizon = 50;
  bool merge_chains = false;
  /// Drop the action that turns back onto the reverse link.
  bool forbid_u_turns = false;
};

/**
 * States are directed edges; the actions of a state are the edges leaving its
 * head node. The destination only loops onto itself, and so does any state
 * left without an action.
 */
RoadMdp build_mdp(const RoadNetwork& net, EdgeId destination, const MdpOptions& options = {});

/// Time-dependent deterministic policy, (state, t) -> action index.
class Policy {
 public:
  Policy() = default;
  Policy(std::size_t states, std::size_t horizon, ActionIndex fill = 0)
      : states_(states), horizon_(horizon), actions_(states * horizon, fill) {}

  ActionIndex at(StateId s, std::size_t t) const { return actions_[t * states_ + s]; }
  void set(StateId s, std::size_t t, ActionIndex a) { actions_[t * states_ + s] = a; }
  std::size_t state_count() const { return states_; }
  std::size_t horizon() const { return horizon_; }

  friend bool operator==(const Policy&, const Policy&) = default;

 private:
  std::size_t states_ = 0;
  std::size_t horizon_ = 0;
  std::vector<ActionIndex> actions_;
};

/// R(s, a), indexed [s][a].
using RewardTable = std::vector<std::vector<double>>;

/// V_t(s), indexed [t][s] for t = 0 .. horizon; the last layer is zero.
using ValueTable = std::vector<std::vector<double>>;

struct Solution {
  Policy policy;
  ValueTable values;
};

/// Optimal policy and values by backward induction; ties go to the lowest action.
Solution backward_induction(const RewardTable& rewards, const Fhmdp& mdp);

/// Bellman recursion for a fixed policy.
ValueTable evaluate_policy(const Policy& policy, const RewardTable& rewards, const Fhmdp& mdp);

/// Total expected reward p0^T V_1 of a fixed policy.
double value_of_policy(const Policy& policy, const RewardTable& rewards, const Fhmdp& mdp,
                       std::span<const double> initial);

/// Human-readable listing of states, attributes and transitions.
void dump_mdp(const RoadMdp& road, std::ostream& out);

}  // namespace parkroute
