#include "parkroute/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>

#include "parkroute/errors.hpp"
#include "parkroute/text.hpp"

namespace parkroute {

std::vector<double> build_gamma(std::size_t window, double gamma_min) {
  if (window == 0) throw ConfigError("window length must be at least 1");
  if (!(gamma_min > 0.0 && gamma_min <= 1.0)) throw ConfigError("gamma_min must lie in (0, 1]");
  if (window == 1) return {1.0};
  std::vector<double> gamma(window);
  // Extended precision, then one rounding: decimal endpoints come out exact.
  const long double J = static_cast<long double>(window);
  const long double slope = (1.0L - static_cast<long double>(gamma_min)) / (J - 1.0L);
  for (std::size_t j = 1; j <= window; ++j) {
    gamma[j - 1] = static_cast<double>(1.0L - (J - static_cast<long double>(j)) * slope);
  }
  return gamma;
}

double confidence_log_term(std::size_t states, std::size_t actions, std::size_t horizon,
                           double delta_prime) {
  return std::log(27.0 * static_cast<double>(states) * static_cast<double>(actions) *
                  static_cast<double>(horizon) / delta_prime);
}

double confidence_bound(double epsilon, double eta, std::size_t visits) {
  const double n = static_cast<double>(visits);
  const double radicand = (2.0 * std::log(std::log(std::max(std::numbers::e, n))) + eta) / n;
  return epsilon * std::sqrt(std::max(0.0, radicand));
}

ActionIndex select_action(std::span<const double> q, ActionIndex default_action, Rng& rng) {
  const double q_max = *std::max_element(q.begin(), q.end());
  std::vector<ActionIndex> best;
  for (ActionIndex a = 0; a < q.size(); ++a) {
    if (q[a] == q_max) best.push_back(a);
  }
  if (best.size() == 1) return best.front();
  if (default_action < q.size() && q[default_action] == q_max) return default_action;
  std::uniform_int_distribution<std::size_t> pick(0, best.size() - 1);
  return best[pick(rng)];
}

MubevLearner::MubevLearner(const Fhmdp& mdp, std::vector<ActionIndex> default_actions,
                           LearnerConfig config)
    : mdp_(&mdp), defaults_(std::move(default_actions)), config_(std::move(config)) {
  const std::size_t S = mdp.state_count();
  const std::size_t H = mdp.horizon();
  if (defaults_.size() != S) throw ConfigError("default policy size mismatch");
  for (StateId s = 0; s < S; ++s) {
    if (defaults_[s] >= mdp.action_count(s)) throw ConfigError("default action out of range");
  }
  if (!(config_.epsilon > 0.0 && config_.epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
  if (!(config_.delta > 0.0 && config_.delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
  if (config_.window == 0) throw ConfigError("window length must be at least 1");
  if (config_.tokens == 0 || config_.tokens > S) throw ConfigError("token count must lie in [1, S]");
  if (config_.gamma.empty()) config_.gamma = build_gamma(config_.window, config_.gamma_min);
  if (config_.gamma.size() != config_.window) throw ConfigError("gamma length must equal the window");

  const std::size_t P = mdp.pair_count();
  state_.visits.assign(P, 0);
  state_.pseudo_visits.assign(P, 0);
  state_.accumulated.assign(P, 0.0);
  state_.estimate.assign(P, 0.0);
  state_.q.assign(P, 0.0);
  state_.phi.assign(P, 0.0);
  state_.memory.assign(P * config_.window, 0.0);
  state_.values.assign(H + 1, std::vector<double>(S, 0.0));
  state_.delta_prime = config_.delta / 9.0;
  state_.v_max = static_cast<double>(H) * config_.r_max;
  state_.phi_plus = 0.0;
  state_.policy = Policy(S, H);
  for (std::size_t t = 0; t < H; ++t) {
    for (StateId s = 0; s < S; ++s) state_.policy.set(s, t, defaults_[s]);
  }
  eta_.resize(S);
  for (StateId s = 0; s < S; ++s) {
    eta_[s] = confidence_log_term(S, mdp.action_count(s), H, state_.delta_prime);
  }
}

std::span<const double> MubevLearner::memory(StateId s, ActionIndex a) const {
  return std::span<const double>(state_.memory).subspan(pair(s, a) * config_.window, config_.window);
}

void MubevLearner::plan(Rng& rng) {
  const std::size_t S = mdp_->state_count();
  const std::size_t H = mdp_->horizon();
  const double r_max = config_.r_max;
  const double growth = 4.0 * std::sqrt(static_cast<double>(S)) * static_cast<double>(H * H);
  std::vector<double> q_s(mdp_->max_action_count());

  for (std::size_t t = H; t-- > 0;) {
    const std::vector<double>& next = state_.values[t + 1];
    const auto [lo, hi] = std::minmax_element(next.begin(), next.end());
    const double v_hi = *hi;
    const double v_range = *hi - *lo;
    const double v_cap = std::min(v_hi, state_.v_max);
    // Steps remaining after this one.
    const double remaining = static_cast<double>(H - t - 1) * r_max;

    for (StateId s = 0; s < S; ++s) {
      const std::size_t A = mdp_->action_count(s);
      // phi_plus may have grown at an earlier state of this layer.
      const double spread = std::min(remaining, v_range + state_.phi_plus);
      for (ActionIndex a = 0; a < A; ++a) {
        const std::size_t p = pair(s, a);
        double r = r_max;
        double ev = v_cap;
        if (state_.pseudo_visits[p] > 0) {
          const double phi = confidence_bound(config_.epsilon, eta_[s], state_.pseudo_visits[p]);
          state_.phi[p] = phi;
          const double v_next = next[mdp_->successor(s, a)];
          r = std::min(r_max, state_.estimate[p] + phi);
          ev = std::min(v_cap, v_next + spread * phi);
        }
        state_.q[p] = r + ev;
        q_s[a] = state_.q[p];
      }
      const ActionIndex chosen =
          select_action(std::span<const double>(q_s.data(), A), defaults_[s], rng);
      state_.policy.set(s, t, chosen);
      state_.values[t][s] = q_s[chosen];
      const std::size_t p = pair(s, chosen);
      if (state_.pseudo_visits[p] > 0) {
        const double phi = confidence_bound(config_.epsilon, eta_[s], state_.pseudo_visits[p]);
        state_.phi_plus = std::max(growth * phi, state_.phi_plus);
      }
    }
  }
}

void MubevLearner::record_transition(StateId s, ActionIndex a, double r) {
  const std::size_t p = pair(s, a);
  const std::size_t J = config_.window;
  state_.accumulated[p] += r;

  if (!config_.mwrm) {
    ++state_.visits[p];
    ++state_.pseudo_visits[p];
    state_.estimate[p] = state_.accumulated[p] / static_cast<double>(state_.visits[p]);
    return;
  }

  double* slot = state_.memory.data() + p * J;
  if (state_.visits[p] < J) {
    slot[state_.visits[p]] = r;
    ++state_.visits[p];
    ++state_.pseudo_visits[p];
    state_.estimate[p] = state_.accumulated[p] / static_cast<double>(state_.visits[p]);
    return;
  }

  state_.accumulated[p] -= slot[0];
  std::shift_left(slot, slot + J, 1);
  slot[J - 1] = r;
  const double weighted = std::inner_product(config_.gamma.begin(), config_.gamma.end(), slot, 0.0);
  const double norm = config_.normalize_by_gamma_sum
                          ? std::accumulate(config_.gamma.begin(), config_.gamma.end(), 0.0)
                          : static_cast<double>(J);
  state_.estimate[p] = weighted / norm;

  if (state_.phi[p] <= config_.phi_min) {
    for (ActionIndex b = 0; b < mdp_->action_count(s); ++b) state_.pseudo_visits[pair(s, b)] = 1;
  } else {
    ++state_.pseudo_visits[p];
  }
}

void MubevLearner::save_checkpoint(std::ostream& out) const {
  const std::size_t S = mdp_->state_count();
  const std::size_t H = mdp_->horizon();
  out << "parkroute-checkpoint 1\n";
  out << "states " << S << " horizon " << H << " window " << config_.window << " mwrm "
      << (config_.mwrm ? 1 : 0) << '\n';
  out << "phi_plus " << format_fixed(state_.phi_plus, 9) << " delta_prime "
      << format_fixed(state_.delta_prime, 12) << " v_max " << format_fixed(state_.v_max, 6) << '\n';
  out << "# s a n n' R rhat q phi | memory\n";
  for (StateId s = 0; s < S; ++s) {
    for (ActionIndex a = 0; a < mdp_->action_count(s); ++a) {
      const std::size_t p = pair(s, a);
      out << s << ' ' << a << ' ' << state_.visits[p] << ' ' << state_.pseudo_visits[p] << ' '
          << format_fixed(state_.accumulated[p], 9) << ' ' << format_fixed(state_.estimate[p], 9)
          << ' ' << format_fixed(state_.q[p], 9) << ' ' << format_fixed(state_.phi[p], 9) << " |";
      for (double m : memory(s, a)) out << ' ' << format_fixed(m, 9);
      out << '\n';
    }
  }
  out << "# values t s V | policy\n";
  for (std::size_t t = 0; t < H; ++t) {
    for (StateId s = 0; s < S; ++s) {
      out << t << ' ' << s << ' ' << format_fixed(state_.values[t][s], 9) << " | "
          << state_.policy.at(s, t) << '\n';
    }
  }
}

}  // namespace parkroute
