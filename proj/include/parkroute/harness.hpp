#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

#include "parkroute/config.hpp"
#include "parkroute/default_policy.hpp"
#include "parkroute/episode.hpp"
#include "parkroute/records.hpp"
#include "parkroute/reward.hpp"

namespace parkroute {

RoadNetwork load_network(const ExperimentConfig& cfg);

/**
 * Everything derived once from a config: MDP, static weights, default policy
 * and reward. Checks alpha against alpha_min and the reward premise. Holds
 * internal pointers, so it is neither copied nor moved.
 */
class Scenario {
 public:
  explicit Scenario(const ExperimentConfig& cfg);
  Scenario(const Scenario&) = delete;
  Scenario& operator=(const Scenario&) = delete;

  double alpha_min;
  RoadMdp road;
  WeightModel weights;
  DefaultPolicy defaults;
  RewardFunction reward;
  /// States touched by any schedule.
  std::vector<bool> scheduled;

  std::vector<StateId> default_route(StateId origin) const;
  std::vector<EdgeId> edge_route(std::span<const StateId> states) const;
};

/// DP: identical to `default_route`. AP: complete and avoids every scheduled
/// state. OTHER: any other complete route.
RouteLabel classify_route(std::span<const StateId> route, bool reached,
                          std::span<const StateId> default_route, const std::vector<bool>& scheduled);

struct RealisationRun {
  std::vector<EpisodeRecord> records;
  /// Weight of the reference agent's default route under each episode's
  /// availability; the reference agent is the test vehicle when present,
  /// token 0 otherwise.
  std::vector<double> default_weight;
};

/// One realisation with `tokens` tokens and an optional test vehicle.
RealisationRun run_realisation(const Scenario& sc, const ExperimentConfig& cfg,
                                           std::size_t realisation, std::size_t tokens, bool mwrm,
                                           bool with_test_vehicle);

/// Labels of one agent, element k for episode k + 1.
std::vector<RouteLabel> label_timeline(const std::vector<EpisodeRecord>& records, std::int64_t agent);

/// 1-based position of the first `target` label that starts a run of
/// `persistence` such labels lying entirely inside `window`.
std::optional<std::size_t> find_adaptation(std::span<const RouteLabel> window, RouteLabel target,
                                           std::size_t persistence = 3);
/// As find_adaptation, saturating at the window length.
std::size_t episodes_to_adapt(std::span<const RouteLabel> window, RouteLabel target,
                              std::size_t persistence = 3);

/// A Full interval and the Free interval that follows it, as episode numbers.
struct Interval {
  std::size_t full_start = 0;
  std::size_t full_end = 0;
  /// Last episode of the following Free interval; < full_end + 1 if empty.
  std::size_t free_end = 0;
};
/// Merged, sorted Full intervals clipped to [1, episodes].
std::vector<Interval> full_intervals(const std::vector<FullPaSchedule>& schedules, std::size_t episodes);

struct IntervalOutcome {
  std::size_t realisation = 0;
  std::size_t interval = 0;
  std::optional<std::size_t> to_ap;
  std::optional<std::size_t> to_dp;
};

struct Experiment1Result {
  std::vector<EdgeId> default_route;
  std::vector<Interval> intervals;
  std::vector<std::vector<EpisodeRecord>> realisations;
  /// [realisation][episode - 1], see RealisationRun.
  std::vector<std::vector<double>> default_weight;
  std::vector<IntervalOutcome> outcomes;
};

struct ArmSummary {
  std::vector<std::vector<EpisodeRecord>> realisations;
  /// Episodes until the first AP in the first Full interval, saturated.
  std::vector<std::size_t> first_ap;
  /// Share of DP labels over the first Full interval.
  std::vector<double> dp_share;
};

struct Experiment2Result {
  std::vector<EdgeId> default_route;
  std::vector<Interval> intervals;
  ArmSummary with_mwrm;
  ArmSummary without_mwrm;
};

struct TokenSweepPoint {
  std::size_t tokens = 0;
  std::vector<std::vector<EpisodeRecord>> realisations;
  /// Episodes until persistent AP after the first Full interval starts.
  std::vector<std::size_t> to_learn;
  /// Episodes until persistent DP after it ends.
  std::vector<std::size_t> to_return;
  double median_learn = 0.0;
  double median_return = 0.0;
};

struct Experiment3Result {
  std::vector<EdgeId> default_route;
  std::vector<Interval> intervals;
  std::vector<TokenSweepPoint> points;
};

Experiment1Result run_experiment1(const ExperimentConfig& cfg);
Experiment2Result run_experiment2(const ExperimentConfig& cfg);
Experiment3Result run_experiment3(const ExperimentConfig& cfg);

double median(std::vector<double> values);
/// Distribution-free 95% interval for the median from order statistics.
std::pair<double, double> median_ci95(std::vector<double> values);

/// Per-episode medians and intervals of one agent over realisations, plus
/// label counts.
nlohmann::json episode_summary(const std::vector<std::vector<EpisodeRecord>>& realisations,
                               std::int64_t agent);

nlohmann::json summarize(const Experiment1Result& result);
nlohmann::json summarize(const Experiment2Result& result);
nlohmann::json summarize(const Experiment3Result& result);

/// Writes CSVs, label timelines and summary.json below `out_dir`.
void write_outputs(const Experiment1Result& result, const std::filesystem::path& out_dir);
void write_outputs(const Experiment2Result& result, const std::filesystem::path& out_dir);
void write_outputs(const Experiment3Result& result, const std::filesystem::path& out_dir);

}  // namespace parkroute
