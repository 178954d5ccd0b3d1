// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "parkroute/harness.hpp"
#include "parkroute/text.hpp"

using namespace parkroute;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& why) {
    if (!cond && ok) detail = why;
    ok = ok && cond;
  }
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.ok = false;
    v.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= budget_s) v.require(false, "runtime budget exceeded");
  if (!v.ok) ++failures;
  std::printf("[%s] criterion %d: %s (%.2f s)%s%s\n", v.ok ? "PASS" : "FAIL", id, name, secs,
              v.detail.empty() ? "" : " - ", v.detail.c_str());
  std::fflush(stdout);
}

std::string csv_text(const std::vector<EpisodeRecord>& rows) {
  std::ostringstream out;
  write_csv(rows, out);
  return out.str();
}

// p0 with dyadic masses, so that p0^T V is exact for dyadic rewards.
std::vector<double> dyadic_distribution(std::size_t S, std::mt19937_64& rng) {
  std::vector<double> p(S, 0.0);
  double remaining = 1.0;
  for (std::size_t s = 0; s + 1 < S; ++s) {
    const int split = static_cast<int>(rng() % 3);
    p[s] = split == 0 ? 0.0 : remaining / (split == 1 ? 2.0 : 4.0);
    remaining -= p[s];
  }
  p[S - 1] = remaining;
  return p;
}

Verdict constants() {
  Verdict v;
  const std::vector<double> want{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  v.require(build_gamma(10, 0.1) == want, "gamma vector not exact");
  const LearnerConfig lc;
  v.require(lc.epsilon == 1.0 && lc.delta == 1.0 && lc.r_max == 1.0 && lc.window == 10 &&
                lc.phi_min == 1.25 && lc.gamma_min == 0.1,
            "shipped learner defaults differ");
  ExperimentConfig cfg = default_experiment1();
  v.require(cfg.mdp.horizon == 50, "shipped horizon is not 50");
  const RoadMdp road = build_mdp(load_network(cfg), cfg.destination, cfg.mdp);
  const MubevLearner learner(road.mdp, std::vector<ActionIndex>(road.mdp.state_count(), 0), lc);
  v.require(learner.state().delta_prime == 1.0 / 9.0, "delta' != 1/9");
  v.require(learner.state().v_max == 50.0, "V_max != 50");
  v.require(learner.config().gamma == want, "learner gamma not exact");
  return v;
}

Verdict oracle_equivalence() {
  Verdict v;
  std::mt19937_64 rng(2024);
  std::size_t full_enum = 0;
  for (int trial = 0; trial < 200 && v.ok; ++trial) {
    const auto [mdp, R] = oracle::random_mdp(rng, 8, 5, 3, true);
    const std::vector<double> p0 = dyadic_distribution(mdp.state_count(), rng);
    const Solution sol = backward_induction(R, mdp);
    double u = 0.0;
    for (StateId s = 0; s < mdp.state_count(); ++s) u += p0[s] * sol.values[0][s];
    v.require(value_of_policy(sol.policy, R, mdp, p0) == u, "policy value differs from V_1");

    double brute = 0.0;
    if (oracle::policy_count(mdp, 1u << 16) <= (1u << 16)) {
      brute = oracle::best_policy_value(mdp, R, p0);
      ++full_enum;
    } else {
      for (StateId s = 0; s < mdp.state_count(); ++s) {
        if (p0[s] != 0.0) brute += p0[s] * oracle::best_sequence_value(mdp, R, s);
      }
    }
    v.require(u == brute, "trial " + std::to_string(trial) + ": BI u differs from enumeration");

    // Learner with stationary rewards, made confident by inflating the counts.
    RewardTable stationary(mdp.state_count());
    std::uniform_real_distribution<double> reward(0.0, 0.9);
    for (StateId s = 0; s < mdp.state_count(); ++s) {
      for (ActionIndex a = 0; a < mdp.action_count(s); ++a) stationary[s].push_back(reward(rng));
    }
    LearnerConfig lc;
    lc.mwrm = false;
    MubevLearner learner(mdp, std::vector<ActionIndex>(mdp.state_count(), 0), lc);
    for (StateId s = 0; s < mdp.state_count(); ++s) {
      for (ActionIndex a = 0; a < mdp.action_count(s); ++a) learner.record_transition(s, a, stationary[s][a]);
    }
    constexpr std::size_t kVisits = 1'000'000'000'000;
    LearnerState& st = learner.mutable_state();
    for (std::size_t p = 0; p < mdp.pair_count(); ++p) {
      st.visits[p] = st.pseudo_visits[p] = kVisits;
      st.accumulated[p] = st.estimate[p] * static_cast<double>(kVisits);
    }
    Rng plan_rng(trial);
    learner.plan(plan_rng);
    v.require(std::ranges::all_of(st.phi, [](double phi) { return phi < 1e-3; }), "phi not below 1e-3");
    RewardTable rhat(mdp.state_count());
    for (StateId s = 0; s < mdp.state_count(); ++s) {
      for (ActionIndex a = 0; a < mdp.action_count(s); ++a) rhat[s].push_back(st.estimate[learner.pair(s, a)]);
    }
    const Solution want = backward_induction(rhat, mdp);
    for (std::size_t t = 0; t < mdp.horizon(); ++t) {
      for (StateId s = 0; s < mdp.state_count(); ++s) {
        const auto optimal = oracle::optimal_actions(mdp, rhat, want.values, s, t, 1e-9);
        const ActionIndex got = learner.policy().at(s, t);
        const bool match = optimal.size() == 1 ? got == want.policy.at(s, t)
                                               : std::ranges::find(optimal, got) != optimal.end();
        v.require(match, "trial " + std::to_string(trial) + ": learner policy differs at s " +
                             std::to_string(s) + " t " + std::to_string(t));
      }
    }
  }
  if (v.ok) v.detail = std::to_string(full_enum) + "/200 by full policy enumeration";
  return v;
}

Verdict degeneration() {
  Verdict v;
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50 && v.ok; ++trial) {
    GridSpec spec;
    spec.rows = 3 + rng() % 6;
    spec.cols = 3 + rng() % 6;
    spec.seed = 5000 + trial;
    const RoadNetwork grid = make_grid(spec);
    std::vector<RoadEdge> edges = grid.edges();
    std::vector<std::string> names;
    for (std::size_t i = 0; i < grid.node_count(); ++i) names.push_back(grid.node_name(i));
    std::uniform_int_distribution<int> len(20, 200);
    for (RoadEdge& e : edges) e.length_m = len(rng);
    const RoadNetwork net(names, edges);
    MdpOptions opt;
    opt.forbid_u_turns = trial % 2 == 0;
    const RoadMdp road = build_mdp(net, edges[rng() % edges.size()].id, opt);
    const DefaultPolicy dp = default_policy(road, WeightModel::for_network(road.states, 1.0));
    std::vector<double> lengths;
    std::vector<std::int64_t> keys;
    for (StateId s = 0; s < road.mdp.state_count(); ++s) {
      lengths.push_back(road.length(s));
      keys.push_back(road.states.edge(s).id);
    }
    const auto want = oracle::length_routes(road.mdp, road.destination, lengths, keys);
    for (StateId s = 0; s < road.mdp.state_count(); ++s) {
      v.require(dp.omega[s] == want.cost[s], "grid " + std::to_string(trial) + ": route weight differs");
      if (s != road.destination && std::isfinite(want.cost[s])) {
        v.require(dp.at(s) == want.next_action[s], "grid " + std::to_string(trial) + ": next edge differs");
      }
    }
  }
  return v;
}

Verdict stationarity() {
  Verdict v;
  ExperimentConfig cfg = default_experiment1();
  cfg.schedules.clear();
  cfg.noise = 0.0;
  cfg.episodes = 100;
  const Scenario sc(cfg);
  MubevLearner learner(sc.road.mdp, sc.defaults.action, cfg.learner);
  ParkingEnvironment env(sc.road, cfg.schedules, cfg.noise, cfg.seed);
  Rng rng(cfg.seed);
  const StateId origin = sc.road.state_of(cfg.origins.front());
  const auto dp = sc.default_route(origin);
  const auto origins = OriginSpec::fixed_states({origin});
  std::size_t dp_episodes = 0, rewards = 0;
  for (std::size_t k = 1; k <= cfg.episodes; ++k) {
    learner.plan(rng);
    const auto trips = run_episode(learner, sc.road, sc.defaults, sc.reward, env.snapshot(), origins, rng);
    for (const TokenTrip& trip : trips) {
      const bool complete = trip.reached && !trip.routing_failed;
      dp_episodes += classify_route(trip.route, complete, dp, sc.scheduled) == RouteLabel::DP;
      for (double r : trip.rewards) {
        ++rewards;
        v.require(r == cfg.learner.r_max, "episode " + std::to_string(k) + ": reward below r_max");
      }
    }
    env.advance();
  }
  v.require(dp_episodes == cfg.episodes, std::to_string(dp_episodes) + "/100 episodes labeled DP");
  v.require(rewards == cfg.episodes * cfg.mdp.horizon, "unexpected transition count");
  return v;
}

Verdict exp1_adaptation() {
  Verdict v;
  const ExperimentConfig cfg = default_experiment1();
  const Experiment1Result res = run_experiment1(cfg);
  std::size_t adapted = 0, returned = 0, with_free = 0, ap_rows = 0;
  for (const IntervalOutcome& o : res.outcomes) {
    adapted += o.to_ap.has_value();
    const Interval& iv = res.intervals[o.interval];
    if (iv.free_end > iv.full_end) {
      ++with_free;
      returned += o.to_dp.has_value();
    }
  }
  for (std::size_t r = 0; r < res.realisations.size(); ++r) {
    for (const EpisodeRecord& rec : res.realisations[r]) {
      const bool in_full = std::ranges::any_of(res.intervals, [&](const Interval& iv) {
        return iv.full_start <= rec.episode && rec.episode <= iv.full_end;
      });
      if (!in_full || rec.label != RouteLabel::AP) continue;
      ++ap_rows;
      v.require(rec.total_weight < res.default_weight[r][rec.episode - 1],
                "AP not lighter than DP at realisation " + std::to_string(r) + " episode " +
                    std::to_string(rec.episode));
    }
  }
  const double a_share = static_cast<double>(adapted) / static_cast<double>(res.outcomes.size());
  const double r_share = with_free ? static_cast<double>(returned) / static_cast<double>(with_free) : 0.0;
  v.require(res.realisations.size() == 20, "expected 20 realisations");
  v.require(a_share >= 0.8, "adapted share below 0.8");
  v.require(r_share >= 0.8, "returned share below 0.8");
  v.require(ap_rows > 0, "no AP episode inside a Full interval");
  char buf[160];
  std::snprintf(buf, sizeof buf, "adapted %.3f, returned %.3f, %zu AP rows checked", a_share, r_share, ap_rows);
  if (v.ok) v.detail = buf;
  else v.detail += std::string("; ") + buf;
  return v;
}

Verdict exp2_mwrm() {
  Verdict v;
  const ExperimentConfig cfg = default_experiment2();
  const Experiment2Result res = run_experiment2(cfg);
  auto to_double = [](const std::vector<std::size_t>& xs) { return std::vector<double>(xs.begin(), xs.end()); };
  const double on = median(to_double(res.with_mwrm.first_ap));
  const double off = median(to_double(res.without_mwrm.first_ap));
  const auto& shares = res.without_mwrm.dp_share;
  const double pooled = std::accumulate(shares.begin(), shares.end(), 0.0) / static_cast<double>(shares.size());
  v.require(res.with_mwrm.first_ap.size() == 20 && shares.size() == 20, "expected 20 paired seeds");
  v.require(on < off, "median first AP with MWRM not smaller");
  v.require(pooled >= 0.5, "DP share without MWRM below 0.5");
  char buf[160];
  std::snprintf(buf, sizeof buf, "median first AP %.1f vs %.1f, DP share without MWRM %.3f", on, off, pooled);
  if (v.ok) v.detail = buf;
  else v.detail += std::string("; ") + buf;
  return v;
}

Verdict exp3_tokens() {
  Verdict v;
  const ExperimentConfig cfg = default_experiment3();
  v.require(cfg.token_counts == std::vector<std::size_t>{1, 5, 10, 20}, "token sweep differs");
  v.require(cfg.realisations == 20, "expected 20 realisations");
  const Experiment3Result res = run_experiment3(cfg);
  std::string text;
  for (std::size_t i = 0; i < res.points.size(); ++i) {
    const TokenSweepPoint& p = res.points[i];
    text += (i ? ", " : "") + std::string("M=") + std::to_string(p.tokens) + " " +
            format_fixed(p.median_learn, 1) + "/" + format_fixed(p.median_return, 1);
    if (i > 0) {
      v.require(p.median_learn <= res.points[i - 1].median_learn, "learn median increases");
      v.require(p.median_return <= res.points[i - 1].median_return, "return median increases");
    }
  }
  if (v.ok) v.detail = "learn/return medians " + text;
  else v.detail += "; " + text;
  return v;
}

Verdict window_semantics() {
  Verdict v;
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> reward(-25.0, 1.0);
  const Fhmdp mdp({{0, 1}, {0}}, 3);
  for (int seq = 0; seq < 10000 && v.ok; ++seq) {
    LearnerConfig lc;
    lc.window = 1 + rng() % 15;
    lc.gamma_min = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    MubevLearner learner(mdp, {0, 0}, lc);
    const std::size_t J = lc.window;
    const auto& gamma = learner.config().gamma;
    std::deque<double> shadow;
    const std::size_t steps = 1 + rng() % (3 * J + 5);
    for (std::size_t k = 0; k < steps && v.ok; ++k) {
      const double r = reward(rng);
      learner.record_transition(0, 1, r);
      shadow.push_back(r);
      if (shadow.size() > J) shadow.pop_front();
      const std::size_t p = learner.pair(0, 1);
      v.require(learner.state().visits[p] <= J, "n exceeds J");
      v.require(learner.state().visits[p] == shadow.size(), "n differs from queue length");
      const auto mem = learner.memory(0, 1);
      v.require(std::equal(shadow.begin(), shadow.end(), mem.begin()), "memory differs from queue");
      if (k >= J) {
        double want = 0.0;
        for (std::size_t j = 0; j < J; ++j) want += gamma[j] * shadow[j];
        want /= static_cast<double>(J);
        const double got = learner.state().estimate[p];
        v.require(std::abs(got - want) <= 1e-12 * std::max(std::abs(want), 1e-300) || got == want,
                  "shift estimate off by more than 1e-12 relative");
      }
    }
  }
  return v;
}

Verdict reward_sign() {
  Verdict v;
  std::mt19937_64 rng(99);
  std::size_t negative = 0, equal = 0;
  for (int net_trial = 0; net_trial < 20; ++net_trial) {
    GridSpec spec;
    spec.rows = 4 + rng() % 5;
    spec.cols = 4 + rng() % 5;
    spec.seed = 900 + net_trial;
    const RoadNetwork net = make_grid(spec);
    const RoadMdp road = build_mdp(net, net.edges()[rng() % net.edge_count()].id, MdpOptions{50, false, true});
    const double alpha_min = find_alpha_min(road.states);
    const double alpha = std::uniform_real_distribution<double>(std::max(alpha_min, 0.5) + 0.01, 1.0)(rng);
    const WeightModel wm = WeightModel::for_network(road.states, alpha);
    const DefaultPolicy dp = default_policy(road, wm);
    const RewardConfig rc{alpha, std::uniform_real_distribution<double>(1, 40)(rng),
                          std::uniform_real_distribution<double>(1, 40)(rng), 1.0};
    const RewardFunction rf(road, dp.omega, rc);
    std::vector<double> nu(road.mdp.state_count());
    for (int draw = 0; draw < 500; ++draw) {
      const StateId s = rng() % road.mdp.state_count();
      if (road.kind[s] != StateKind::Road || !dp.routable[s]) continue;
      const StateId def = road.mdp.successor(s, dp.at(s));
      const StateId next = road.mdp.successor(s, rng() % road.mdp.action_count(s));
      if (!dp.routable[next]) continue;
      for (StateId x = 0; x < nu.size(); ++x) nu[x] = std::floor(std::uniform_real_distribution<double>(0, road.capacity(x) + 1)(rng));
      const double w_def = wm.weight(road.length(def), road.capacity(def));
      const double w_taken = wm.weight(road.length(next), nu[next]);
      const double ref = dp.omega[def] + w_def;
      const double taken = dp.omega[next] + w_taken;
      if (w_def == w_taken) {
        ++equal;
        v.require(rf.evaluate(s, next, def, nu) == rc.r_max, "equal weights did not pay r_max");
      } else if (ref > 0.0 && taken > ref) {
        ++negative;
        v.require(rf.evaluate(s, next, def, nu) < 0.0, "premise met but reward not negative");
      }
      // Equal-weight input built directly: the default move at full capacity.
      nu[def] = road.capacity(def);
      ++equal;
      v.require(rf.evaluate(s, def, def, nu) == rc.r_max, "unchanged default move did not pay r_max");
    }
  }
  v.require(negative > 1000, "too few premise cases sampled");
  if (v.ok) v.detail = std::to_string(negative) + " negative-premise and " + std::to_string(equal) + " equal-weight cases";
  return v;
}

Verdict determinism() {
  Verdict v;
  auto shrink = [](ExperimentConfig cfg, std::size_t threads) {
    cfg.realisations = 4;
    cfg.threads = threads;
    return cfg;
  };
  {
    const auto a = run_experiment1(shrink(default_experiment1(), 1));
    const auto b = run_experiment1(shrink(default_experiment1(), 4));
    for (std::size_t r = 0; r < a.realisations.size(); ++r) {
      v.require(csv_text(a.realisations[r]) == csv_text(b.realisations[r]), "Exp 1 CSV differs");
    }
  }
  {
    const auto a = run_experiment2(shrink(default_experiment2(), 1));
    const auto b = run_experiment2(shrink(default_experiment2(), 3));
    for (std::size_t r = 0; r < a.with_mwrm.realisations.size(); ++r) {
      v.require(csv_text(a.with_mwrm.realisations[r]) == csv_text(b.with_mwrm.realisations[r]), "Exp 2 CSV differs");
      v.require(csv_text(a.without_mwrm.realisations[r]) == csv_text(b.without_mwrm.realisations[r]),
                "Exp 2 CSV differs");
    }
  }
  {
    ExperimentConfig cfg = shrink(default_experiment3(), 1);
    const auto a = run_experiment3(cfg);
    cfg.threads = 5;
    const auto b = run_experiment3(cfg);
    for (std::size_t p = 0; p < a.points.size(); ++p) {
      for (std::size_t r = 0; r < a.points[p].realisations.size(); ++r) {
        v.require(csv_text(a.points[p].realisations[r]) == csv_text(b.points[p].realisations[r]), "Exp 3 CSV differs");
      }
    }
  }
  return v;
}

}  // namespace

int main() {
  criterion(1, "constants fidelity", 1, constants);
  criterion(2, "oracle equivalence", 30, oracle_equivalence);
  criterion(3, "degeneration at alpha = 1", 10, degeneration);
  criterion(4, "no-uncertainty stationarity", 10, stationarity);
  criterion(5, "Exp 1 adaptation", 120, exp1_adaptation);
  criterion(6, "Exp 2 MWRM benefit", 180, exp2_mwrm);
  criterion(7, "Exp 3 token scaling", 300, exp3_tokens);
  criterion(8, "window semantics", 10, window_semantics);
  criterion(9, "reward sign", 5, reward_sign);
  criterion(10, "determinism", 60, determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
