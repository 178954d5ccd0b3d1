#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "parkroute/mdp.hpp"

namespace parkroute {

using Rng = std::mt19937_64;

struct LearnerConfig {
  double epsilon = 1.0;
  double delta = 1.0;
  /// J, length of the reward memory.
  std::size_t window = 10;
  /// M, tokens probing the environment each episode.
  std::size_t tokens = 1;
  double r_max = 1.0;
  /// Confidence bound at or below which the pseudo-counts of a state restart.
  double phi_min = 1.25;
  double gamma_min = 0.1;
  bool mwrm = true;
  /// Divide the discounted memory by sum(gamma) instead of J.
  bool normalize_by_gamma_sum = false;
  /// Discount vector of length J; built from gamma_min when left empty.
  std::vector<double> gamma;
};

/// gamma_j = 1 - (J - j)(1 - gamma_min)/(J - 1), j = 1..J. J = 1 gives {1}.
std::vector<double> build_gamma(std::size_t window, double gamma_min);

/// eta = ln(27 S A_s H / delta').
double confidence_log_term(std::size_t states, std::size_t actions, std::size_t horizon,
                           double delta_prime);

/// phi = epsilon * sqrt((2 ln ln max(e, n') + eta) / n'), radicand clamped at zero.
double confidence_bound(double epsilon, double eta, std::size_t visits);

/**
 * Unique maximum wins. A repeated maximum goes to the default action when it
 * attains it, otherwise to a uniform draw among the maximisers; `rng` is only
 * consumed in that last case.
 */
ActionIndex select_action(std::span<const double> q, ActionIndex default_action, Rng& rng);

/// All statistics, in flat per-(s, a) tables indexed by Fhmdp::offset(s) + a.
struct LearnerState {
  std::vector<std::size_t> visits;         // n
  std::vector<std::size_t> pseudo_visits;  // n'
  std::vector<double> accumulated;         // R
  std::vector<double> estimate;            // r-hat
  std::vector<double> q;
  std::vector<double> phi;
  /// Reward memory, `window` slots per pair, oldest first.
  std::vector<double> memory;
  /// V-hat, [t][s] with t = 0 .. H; the last layer stays zero.
  ValueTable values;
  double phi_plus = 0.0;
  Policy policy;
  double delta_prime = 0.0;
  double v_max = 0.0;
};

/**
 * Optimistic finite-horizon learner with a moving reward window. Planning
 * computes an optimistic Q from reward estimates plus confidence bonuses and
 * breaks ties toward the default policy; executed transitions update the
 * counts and the windowed reward estimates.
 */
class MubevLearner {
 public:
  MubevLearner(const Fhmdp& mdp, std::vector<ActionIndex> default_actions, LearnerConfig config);

  /// One backward planning pass over t = H..1; refreshes policy, values, phi
  /// and phi_plus.
  void plan(Rng& rng);

  /// Observed reward r for playing a in s.
  void record_transition(StateId s, ActionIndex a, double r);

  const Policy& policy() const { return state_.policy; }
  ActionIndex default_action(StateId s) const { return defaults_[s]; }
  const LearnerState& state() const { return state_; }
  /// Direct access for checkpoint restore and tests.
  LearnerState& mutable_state() { return state_; }
  const LearnerConfig& config() const { return config_; }
  const Fhmdp& mdp() const { return *mdp_; }

  std::size_t pair(StateId s, ActionIndex a) const { return mdp_->offset(s) + a; }
  std::span<const double> memory(StateId s, ActionIndex a) const;

  /// Versioned text dump of every table (format `parkroute-checkpoint 1`).
  void save_checkpoint(std::ostream& out) const;

 private:
  const Fhmdp* mdp_;
  std::vector<ActionIndex> defaults_;
  LearnerConfig config_;
  LearnerState state_;
  std::vector<double> eta_;
};

}  // namespace parkroute
