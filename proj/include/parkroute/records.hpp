#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "parkroute/network.hpp"

namespace parkroute {

enum class RouteLabel { DP, AP, Other, Incomplete };

std::string_view label_name(RouteLabel label);
/// Accepts the names produced by label_name.
RouteLabel parse_label(std::string_view name);
/// One-letter code for timelines: D, A, O, I.
char label_code(RouteLabel label);

/// agent_id of the recommendation test vehicle; tokens are numbered from 0.
inline constexpr std::int64_t kTestVehicle = -1;

struct EpisodeRecord {
  std::size_t realisation = 0;
  std::size_t episode = 0;
  std::int64_t agent_id = 0;
  RouteLabel label = RouteLabel::Incomplete;
  /// Original edge ids in driving order. Not part of the CSV.
  std::vector<EdgeId> route;
  double total_weight = 0.0;
  double distance_m = 0.0;
  double availability = 0.0;
  bool success = false;
};

/// Equality over the CSV columns.
bool same_row(const EpisodeRecord& a, const EpisodeRecord& b);

/// Header plus one row per record. Doubles use the shortest fixed-point text
/// that reads back to the same value.
void write_csv(const std::vector<EpisodeRecord>& records, std::ostream& out);
/// Throws IoError naming the path when it cannot be written.
void emit_csv(const std::vector<EpisodeRecord>& records, const std::filesystem::path& path);

std::vector<EpisodeRecord> read_csv(std::istream& in);
std::vector<EpisodeRecord> load_csv(const std::filesystem::path& path);

}  // namespace parkroute
