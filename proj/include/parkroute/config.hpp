#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parkroute/environment.hpp"
#include "parkroute/learner.hpp"
#include "parkroute/mdp.hpp"
#include "parkroute/network.hpp"

namespace parkroute {

/// Ordered `key = value` entries; keys may repeat.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Blank lines and lines starting with `#` are skipped; text after ` #` is a
/// trailing comment.
KeyValues parse_key_values(std::istream& in);

struct ExperimentConfig {
  /// Edge-list file; when empty the grid generator is used.
  std::filesystem::path network_file;
  GridSpec grid{8, 8, 100.0, {0, 5, 10}, 30};

  EdgeId destination = 220;
  /// Fixed token origins, one per token.
  std::vector<EdgeId> origins{0};
  bool uniform_origins = false;
  /// Origin of the recommendation test vehicle (Exp 3).
  EdgeId test_origin = 0;

  double alpha = 0.66;
  double beta_default = 20.0;
  double beta_alternative = 20.0;
  MdpOptions mdp{50, false, true};
  LearnerConfig learner;

  double noise = 0.0;
  std::vector<FullPaSchedule> schedules;

  std::size_t episodes = 200;
  std::size_t realisations = 20;
  /// Realisation r uses seed + r.
  std::uint64_t seed = 1;
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 0;
  /// Exp 3 token-count sweep.
  std::vector<std::size_t> token_counts{1, 5, 10, 20};
};

/// Shipped defaults: alternating 20-episode Free/Full intervals over 200
/// episodes on an 8x8 grid.
ExperimentConfig default_experiment1();
/// 60 free, 15 full, 10 free, 60 full.
ExperimentConfig default_experiment2();
/// Full parking area on episodes 25-45, token sweep, uniform origins.
ExperimentConfig default_experiment3();

/// Overrides fields of `cfg`. Unknown keys and malformed values throw
/// ConfigError. Any `schedule` entry replaces the default schedule list.
void apply_key_values(ExperimentConfig& cfg, const KeyValues& entries,
                      const std::filesystem::path& base_dir = {});

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base);

/// Renders every field as a loadable config file.
void write_config(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace parkroute
