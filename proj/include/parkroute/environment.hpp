#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "parkroute/mdp.hpp"
#include "parkroute/reward.hpp"

namespace parkroute {

/// A set of links whose roadside parking is fully occupied during
/// episodes [start, end], both inclusive.
struct FullPaSchedule {
  std::vector<EdgeId> edges;
  std::size_t start = 1;
  std::size_t end = 1;

  bool active(std::size_t episode) const { return start <= episode && episode <= end; }
};

// Schedule file: `edge_ids;start_episode;end_episode`, edge ids comma-separated.
std::vector<FullPaSchedule> read_schedules(std::istream& in);
std::vector<FullPaSchedule> load_schedules(const std::filesystem::path& path);
void write_schedules(const std::vector<FullPaSchedule>& schedules, std::ostream& out);

/**
 * Seeded per-episode parking availability. A state covered by an active
 * schedule has no free space; otherwise each space is independently occupied
 * with probability `noise`, drawn from a hash of (seed, episode, state, space)
 * so that any episode can be observed in any order with identical results.
 * Availability is constant within an episode.
 */
class ParkingEnvironment {
 public:
  ParkingEnvironment(const RoadMdp& road, std::vector<FullPaSchedule> schedules, double noise,
                     std::uint64_t seed);

  /// Episodes are numbered from 1.
  std::size_t episode() const { return episode_; }
  std::size_t advance() { return ++episode_; }

  double observe(StateId s, std::size_t episode) const;
  bool fully_occupied(StateId s, std::size_t episode) const;
  AvailabilitySnapshot snapshot(std::size_t episode) const;
  AvailabilitySnapshot snapshot() const { return snapshot(episode_); }

  const std::vector<FullPaSchedule>& schedules() const { return schedules_; }
  /// States touched by schedule `k`.
  const std::vector<StateId>& schedule_states(std::size_t k) const { return covered_[k]; }

 private:
  const RoadMdp* road_;
  std::vector<FullPaSchedule> schedules_;
  std::vector<std::vector<StateId>> covered_;
  double noise_;
  std::uint64_t seed_;
  std::size_t episode_ = 1;
};

}  // namespace parkroute
