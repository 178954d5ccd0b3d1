#include "parkroute/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "parkroute/errors.hpp"
#include "parkroute/text.hpp"

namespace parkroute {
namespace {

double checked_alpha_min(const RoadNetwork& net, double alpha) {
  const double alpha_min = find_alpha_min(net);
  if (alpha < alpha_min - 1e-12) {
    throw InfeasibleAlpha("alpha " + format_fixed(alpha, 4) + " is below alpha_min " +
                          format_fixed(alpha_min, 2));
  }
  return alpha_min;
}

/// Runs job(i) for i in [0, n) on a small pool; results are written by index
/// so the caller's fold order stays fixed.
template <typename Job>
void parallel_for(std::size_t n, std::size_t threads, Job job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

std::span<const RouteLabel> slice(const std::vector<RouteLabel>& labels, std::size_t first,
                                  std::size_t last) {
  if (first < 1 || last < first || last > labels.size()) return {};
  return std::span<const RouteLabel>(labels).subspan(first - 1, last - first + 1);
}

nlohmann::json stat_json(const std::vector<double>& values) {
  const auto [lo, hi] = median_ci95(values);
  return {{"median", median(values)}, {"ci95", {lo, hi}}};
}

nlohmann::json optional_json(const std::optional<std::size_t>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json intervals_json(const std::vector<Interval>& intervals) {
  nlohmann::json out = nlohmann::json::array();
  for (const Interval& iv : intervals) {
    out.push_back({{"full_start", iv.full_start}, {"full_end", iv.full_end}, {"free_end", iv.free_end}});
  }
  return out;
}

std::vector<double> as_doubles(const std::vector<std::size_t>& v) {
  return std::vector<double>(v.begin(), v.end());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string realisation_file(std::size_t r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "realisation_%03zu.csv", r);
  return buf;
}

void write_realisations(const std::vector<std::vector<EpisodeRecord>>& realisations,
                        std::int64_t agent, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::string timeline;
  for (std::size_t r = 0; r < realisations.size(); ++r) {
    emit_csv(realisations[r], dir / realisation_file(r));
    for (RouteLabel l : label_timeline(realisations[r], agent)) timeline += label_code(l);
    timeline += '\n';
  }
  write_text(dir / "labels.txt", timeline);
}

}  // namespace

RoadNetwork load_network(const ExperimentConfig& cfg) {
  return cfg.network_file.empty() ? make_grid(cfg.grid) : load_edge_list(cfg.network_file);
}

Scenario::Scenario(const ExperimentConfig& cfg)
    : alpha_min(checked_alpha_min(load_network(cfg), cfg.alpha)),
      road(build_mdp(load_network(cfg), cfg.destination, cfg.mdp)),
      weights(WeightModel::for_network(road.states, cfg.alpha)),
      defaults(default_policy(road, weights)),
      reward(road, defaults.omega,
             RewardConfig{cfg.alpha, cfg.beta_default, cfg.beta_alternative, cfg.learner.r_max}),
      scheduled(road.mdp.state_count(), false) {
  reward.validate();
  for (const FullPaSchedule& s : cfg.schedules) {
    for (EdgeId id : s.edges) scheduled[road.state_of(id)] = true;
  }
}

std::vector<StateId> Scenario::default_route(StateId origin) const {
  return defaults.route_from(road.mdp, origin, road.destination);
}

std::vector<EdgeId> Scenario::edge_route(std::span<const StateId> states) const {
  std::vector<EdgeId> out;
  for (StateId s : states) {
    out.insert(out.end(), road.constituents[s].begin(), road.constituents[s].end());
  }
  return out;
}

RouteLabel classify_route(std::span<const StateId> route, bool reached,
                          std::span<const StateId> default_route, const std::vector<bool>& scheduled) {
  if (!reached) return RouteLabel::Incomplete;
  if (std::ranges::equal(route, default_route)) return RouteLabel::DP;
  const bool touches = std::ranges::any_of(route, [&](StateId s) { return scheduled[s]; });
  return touches ? RouteLabel::Other : RouteLabel::AP;
}

RealisationRun run_realisation(const Scenario& sc, const ExperimentConfig& cfg,
                               std::size_t realisation, std::size_t tokens, bool mwrm,
                               bool with_test_vehicle) {
  const std::uint64_t seed = cfg.seed + realisation;
  LearnerConfig lc = cfg.learner;
  lc.tokens = tokens;
  lc.mwrm = mwrm;
  MubevLearner learner(sc.road.mdp, sc.defaults.action, lc);
  ParkingEnvironment env(sc.road, cfg.schedules, cfg.noise, seed);
  Rng rng(seed);

  OriginSpec origins = OriginSpec::uniform_distinct();
  if (!cfg.uniform_origins) {
    if (cfg.origins.size() != tokens) {
      throw ConfigError("fixed origins: " + std::to_string(cfg.origins.size()) + " listed for " +
                        std::to_string(tokens) + " tokens");
    }
    std::vector<StateId> states;
    for (EdgeId id : cfg.origins) states.push_back(sc.road.state_of(id));
    origins = OriginSpec::fixed_states(std::move(states));
  }

  std::map<StateId, std::vector<StateId>> routes;
  auto default_route = [&](StateId origin) -> const std::vector<StateId>& {
    auto it = routes.find(origin);
    if (it == routes.end()) it = routes.emplace(origin, sc.default_route(origin)).first;
    return it->second;
  };

  const StateId test_state = sc.road.state_of(cfg.test_origin);
  const StateId reference = with_test_vehicle ? test_state
                            : origins.fixed.empty() ? test_state
                                                    : origins.fixed.front();
  std::optional<std::vector<StateId>> last_valid;

  RealisationRun run;
  for (std::size_t k = 1; k <= cfg.episodes; ++k) {
    learner.plan(rng);
    const AvailabilitySnapshot snapshot = env.snapshot();
    const auto trips = run_episode(learner, sc.road, sc.defaults, sc.reward, snapshot, origins, rng);
    for (const TokenTrip& trip : trips) {
      EpisodeRecord rec;
      rec.realisation = realisation;
      rec.episode = k;
      rec.agent_id = static_cast<std::int64_t>(trip.token);
      const bool complete = trip.reached && !trip.routing_failed;
      rec.label = classify_route(trip.route, complete, default_route(trip.origin), sc.scheduled);
      rec.route = sc.edge_route(trip.route);
      rec.total_weight = trip.metrics.total_weight;
      rec.distance_m = trip.metrics.distance_m;
      rec.availability = trip.metrics.availability;
      rec.success = complete;
      run.records.push_back(std::move(rec));
    }
    if (with_test_vehicle) {
      Rollout r = roll_out(learner.policy(), sc.road, test_state);
      if (r.reached) last_valid = r.route;
      const std::vector<StateId>& used = last_valid ? *last_valid : r.route;
      const RouteMetrics m = measure_route(sc.road, sc.weights, used, snapshot);
      EpisodeRecord rec;
      rec.realisation = realisation;
      rec.episode = k;
      rec.agent_id = kTestVehicle;
      rec.label = classify_route(used, last_valid.has_value(), default_route(test_state), sc.scheduled);
      rec.route = sc.edge_route(used);
      rec.total_weight = m.total_weight;
      rec.distance_m = m.distance_m;
      rec.availability = m.availability;
      rec.success = last_valid.has_value();
      run.records.push_back(std::move(rec));
    }
    run.default_weight.push_back(
        measure_route(sc.road, sc.weights, default_route(reference), snapshot).total_weight);
    env.advance();
  }
  return run;
}

std::vector<RouteLabel> label_timeline(const std::vector<EpisodeRecord>& records, std::int64_t agent) {
  std::vector<RouteLabel> out;
  for (const EpisodeRecord& r : records) {
    if (r.agent_id != agent) continue;
    if (r.episode > out.size()) out.resize(r.episode, RouteLabel::Incomplete);
    out[r.episode - 1] = r.label;
  }
  return out;
}

std::optional<std::size_t> find_adaptation(std::span<const RouteLabel> window, RouteLabel target,
                                           std::size_t persistence) {
  persistence = std::max<std::size_t>(persistence, 1);
  std::size_t run = 0;
  for (std::size_t i = 0; i < window.size(); ++i) {
    run = window[i] == target ? run + 1 : 0;
    if (run == persistence) return i + 2 - persistence;
  }
  return std::nullopt;
}

std::size_t episodes_to_adapt(std::span<const RouteLabel> window, RouteLabel target,
                              std::size_t persistence) {
  return find_adaptation(window, target, persistence).value_or(window.size());
}

std::vector<Interval> full_intervals(const std::vector<FullPaSchedule>& schedules, std::size_t episodes) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  for (const FullPaSchedule& s : schedules) {
    if (s.start > episodes) continue;
    spans.emplace_back(std::max<std::size_t>(s.start, 1), std::min(s.end, episodes));
  }
  std::ranges::sort(spans);
  std::vector<Interval> out;
  for (const auto& [start, end] : spans) {
    if (!out.empty() && start <= out.back().full_end + 1) {
      out.back().full_end = std::max(out.back().full_end, end);
    } else {
      out.push_back({start, end, 0});
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].free_end = i + 1 < out.size() ? out[i + 1].full_start - 1 : episodes;
  }
  return out;
}

Experiment1Result run_experiment1(const ExperimentConfig& cfg) {
  const Scenario sc(cfg);
  Experiment1Result res;
  res.intervals = full_intervals(cfg.schedules, cfg.episodes);
  if (!cfg.origins.empty()) res.default_route = sc.edge_route(sc.default_route(sc.road.state_of(cfg.origins.front())));
  res.realisations.resize(cfg.realisations);
  res.default_weight.resize(cfg.realisations);
  parallel_for(cfg.realisations, cfg.threads, [&](std::size_t r) {
    RealisationRun run = run_realisation(sc, cfg, r, cfg.learner.tokens, cfg.learner.mwrm, false);
    res.realisations[r] = std::move(run.records);
    res.default_weight[r] = std::move(run.default_weight);
  });
  for (std::size_t r = 0; r < cfg.realisations; ++r) {
    const auto labels = label_timeline(res.realisations[r], 0);
    for (std::size_t i = 0; i < res.intervals.size(); ++i) {
      const Interval& iv = res.intervals[i];
      res.outcomes.push_back({r, i, find_adaptation(slice(labels, iv.full_start, iv.full_end), RouteLabel::AP),
                              find_adaptation(slice(labels, iv.full_end + 1, iv.free_end), RouteLabel::DP)});
    }
  }
  return res;
}

Experiment2Result run_experiment2(const ExperimentConfig& cfg) {
  const Scenario sc(cfg);
  Experiment2Result res;
  res.intervals = full_intervals(cfg.schedules, cfg.episodes);
  if (!cfg.origins.empty()) res.default_route = sc.edge_route(sc.default_route(sc.road.state_of(cfg.origins.front())));
  const std::size_t R = cfg.realisations;
  res.with_mwrm.realisations.resize(R);
  res.without_mwrm.realisations.resize(R);
  parallel_for(2 * R, cfg.threads, [&](std::size_t job) {
    const bool mwrm = job < R;
    const std::size_t r = job % R;
    ArmSummary& arm = mwrm ? res.with_mwrm : res.without_mwrm;
    arm.realisations[r] = run_realisation(sc, cfg, r, cfg.learner.tokens, mwrm, false).records;
  });
  for (ArmSummary* arm : {&res.with_mwrm, &res.without_mwrm}) {
    for (std::size_t r = 0; r < R; ++r) {
      const auto labels = label_timeline(arm->realisations[r], 0);
      if (res.intervals.empty()) {
        arm->first_ap.push_back(0);
        arm->dp_share.push_back(1.0);
        continue;
      }
      const auto window = slice(labels, res.intervals[0].full_start, res.intervals[0].full_end);
      arm->first_ap.push_back(episodes_to_adapt(window, RouteLabel::AP, 1));
      const auto dp = std::ranges::count(window, RouteLabel::DP);
      arm->dp_share.push_back(window.empty() ? 1.0 : static_cast<double>(dp) / static_cast<double>(window.size()));
    }
  }
  return res;
}

Experiment3Result run_experiment3(const ExperimentConfig& cfg) {
  const Scenario sc(cfg);
  Experiment3Result res;
  res.intervals = full_intervals(cfg.schedules, cfg.episodes);
  res.default_route = sc.edge_route(sc.default_route(sc.road.state_of(cfg.test_origin)));
  const std::size_t R = cfg.realisations;
  const std::size_t P = cfg.token_counts.size();
  res.points.resize(P);
  for (std::size_t p = 0; p < P; ++p) {
    res.points[p].tokens = cfg.token_counts[p];
    res.points[p].realisations.resize(R);
  }
  parallel_for(P * R, cfg.threads, [&](std::size_t job) {
    TokenSweepPoint& pt = res.points[job / R];
    pt.realisations[job % R] = run_realisation(sc, cfg, job % R, pt.tokens, cfg.learner.mwrm, true).records;
  });
  for (TokenSweepPoint& pt : res.points) {
    for (std::size_t r = 0; r < R; ++r) {
      const auto labels = label_timeline(pt.realisations[r], kTestVehicle);
      if (res.intervals.empty()) break;
      const Interval& iv = res.intervals[0];
      pt.to_learn.push_back(episodes_to_adapt(slice(labels, iv.full_start, iv.full_end), RouteLabel::AP));
      pt.to_return.push_back(episodes_to_adapt(slice(labels, iv.full_end + 1, iv.free_end), RouteLabel::DP));
    }
    pt.median_learn = median(as_doubles(pt.to_learn));
    pt.median_return = median(as_doubles(pt.to_return));
  }
  return res;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::ranges::sort(values);
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::pair<double, double> median_ci95(std::vector<double> values) {
  if (values.empty()) return {std::nan(""), std::nan("")};
  std::ranges::sort(values);
  const double n = static_cast<double>(values.size());
  const double half = 1.959964 * std::sqrt(n) / 2.0;
  const auto lo = static_cast<std::size_t>(std::clamp(std::floor(n / 2.0 - half), 1.0, n));
  const auto hi = static_cast<std::size_t>(std::clamp(std::ceil(n / 2.0 + half + 1.0), 1.0, n));
  return {values[lo - 1], values[hi - 1]};
}

nlohmann::json episode_summary(const std::vector<std::vector<EpisodeRecord>>& realisations,
                               std::int64_t agent) {
  std::map<std::size_t, std::vector<const EpisodeRecord*>> by_episode;
  for (const auto& records : realisations) {
    for (const EpisodeRecord& r : records) {
      if (r.agent_id == agent) by_episode[r.episode].push_back(&r);
    }
  }
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [episode, recs] : by_episode) {
    std::vector<double> weight, distance, availability;
    nlohmann::json labels = {{"DP", 0}, {"AP", 0}, {"OTHER", 0}, {"INCOMPLETE", 0}};
    std::size_t successes = 0;
    for (const EpisodeRecord* r : recs) {
      weight.push_back(r->total_weight);
      distance.push_back(r->distance_m);
      availability.push_back(r->availability);
      labels[std::string(label_name(r->label))] = labels[std::string(label_name(r->label))].get<int>() + 1;
      successes += r->success;
    }
    out.push_back({{"episode", episode},
                   {"total_weight", stat_json(weight)},
                   {"distance_m", stat_json(distance)},
                   {"availability", stat_json(availability)},
                   {"labels", labels},
                   {"success_rate", static_cast<double>(successes) / static_cast<double>(recs.size())}});
  }
  return out;
}

nlohmann::json summarize(const Experiment1Result& res) {
  std::size_t adapted = 0, returned = 0, with_free = 0;
  nlohmann::json outcomes = nlohmann::json::array();
  for (const IntervalOutcome& o : res.outcomes) {
    adapted += o.to_ap.has_value();
    const Interval& iv = res.intervals[o.interval];
    if (iv.free_end > iv.full_end) {
      ++with_free;
      returned += o.to_dp.has_value();
    }
    outcomes.push_back({{"realisation", o.realisation}, {"interval", o.interval},
                        {"episodes_to_ap", optional_json(o.to_ap)},
                        {"episodes_to_dp", optional_json(o.to_dp)}});
  }
  const double pairs = static_cast<double>(res.outcomes.size());
  return {{"experiment", 1},
          {"default_route", res.default_route},
          {"intervals", intervals_json(res.intervals)},
          {"adapted_share", pairs > 0 ? adapted / pairs : 0.0},
          {"returned_share", with_free > 0 ? static_cast<double>(returned) / with_free : 0.0},
          {"outcomes", outcomes},
          {"per_episode", episode_summary(res.realisations, 0)}};
}

nlohmann::json summarize(const Experiment2Result& res) {
  auto arm_json = [](const ArmSummary& arm) {
    return nlohmann::json{{"first_ap", arm.first_ap},
                          {"first_ap_median", median(as_doubles(arm.first_ap))},
                          {"dp_share", arm.dp_share},
                          {"dp_share_median", median(arm.dp_share)},
                          {"per_episode", episode_summary(arm.realisations, 0)}};
  };
  return {{"experiment", 2},
          {"default_route", res.default_route},
          {"intervals", intervals_json(res.intervals)},
          {"with_mwrm", arm_json(res.with_mwrm)},
          {"without_mwrm", arm_json(res.without_mwrm)}};
}

nlohmann::json summarize(const Experiment3Result& res) {
  nlohmann::json points = nlohmann::json::array();
  for (const TokenSweepPoint& pt : res.points) {
    points.push_back({{"tokens", pt.tokens},
                      {"episodes_to_learn", pt.to_learn},
                      {"episodes_to_return", pt.to_return},
                      {"median_learn", pt.median_learn},
                      {"median_return", pt.median_return},
                      {"learn_ci95", median_ci95(as_doubles(pt.to_learn))},
                      {"return_ci95", median_ci95(as_doubles(pt.to_return))},
                      {"test_vehicle", episode_summary(pt.realisations, kTestVehicle)}});
  }
  return {{"experiment", 3},
          {"default_route", res.default_route},
          {"intervals", intervals_json(res.intervals)},
          {"points", points}};
}

void write_outputs(const Experiment1Result& res, const std::filesystem::path& out_dir) {
  write_realisations(res.realisations, 0, out_dir);
  write_text(out_dir / "summary.json", summarize(res).dump(2) + "\n");
}

void write_outputs(const Experiment2Result& res, const std::filesystem::path& out_dir) {
  write_realisations(res.with_mwrm.realisations, 0, out_dir / "mwrm_on");
  write_realisations(res.without_mwrm.realisations, 0, out_dir / "mwrm_off");
  write_text(out_dir / "summary.json", summarize(res).dump(2) + "\n");
}

void write_outputs(const Experiment3Result& res, const std::filesystem::path& out_dir) {
  for (const TokenSweepPoint& pt : res.points) {
    write_realisations(pt.realisations, kTestVehicle, out_dir / ("tokens_" + std::to_string(pt.tokens)));
  }
  write_text(out_dir / "summary.json", summarize(res).dump(2) + "\n");
}

}  // namespace parkroute
