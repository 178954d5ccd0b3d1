#include "parkroute/environment.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <string>

#include "parkroute/errors.hpp"
#include "parkroute/text.hpp"

namespace parkroute {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_draw(std::uint64_t seed, std::uint64_t episode, std::uint64_t state, std::uint64_t space) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ episode);
  h = splitmix64(h ^ state);
  h = splitmix64(h ^ space);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<FullPaSchedule> read_schedules(std::istream& in) {
  std::vector<FullPaSchedule> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = split(view, ';');
    if (fields.size() != 3) {
      throw ConfigError("schedule line " + std::to_string(line_no) + ": expected 3 fields");
    }
    FullPaSchedule s;
    for (std::string_view id : split(fields[0], ',')) s.edges.push_back(parse_number<EdgeId>(id));
    s.start = parse_number<std::size_t>(fields[1]);
    s.end = parse_number<std::size_t>(fields[2]);
    if (s.start > s.end) {
      throw ConfigError("schedule line " + std::to_string(line_no) + ": start after end");
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<FullPaSchedule> load_schedules(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schedule file " + path.string());
  return read_schedules(in);
}

void write_schedules(const std::vector<FullPaSchedule>& schedules, std::ostream& out) {
  for (const FullPaSchedule& s : schedules) {
    for (std::size_t i = 0; i < s.edges.size(); ++i) out << (i ? "," : "") << s.edges[i];
    out << ';' << s.start << ';' << s.end << '\n';
  }
}

ParkingEnvironment::ParkingEnvironment(const RoadMdp& road, std::vector<FullPaSchedule> schedules,
                                       double noise, std::uint64_t seed)
    : road_(&road), schedules_(std::move(schedules)), noise_(noise), seed_(seed) {
  if (noise_ < 0.0 || noise_ > 1.0) throw ConfigError("noise must lie in [0, 1]");
  for (const FullPaSchedule& s : schedules_) {
    if (s.start > s.end) throw ConfigError("schedule starts after it ends");
    std::vector<StateId> states;
    for (EdgeId id : s.edges) states.push_back(road.state_of(id));
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    covered_.push_back(std::move(states));
  }
}

bool ParkingEnvironment::fully_occupied(StateId s, std::size_t episode) const {
  for (std::size_t k = 0; k < schedules_.size(); ++k) {
    if (schedules_[k].active(episode) &&
        std::binary_search(covered_[k].begin(), covered_[k].end(), s)) {
      return true;
    }
  }
  return false;
}

double ParkingEnvironment::observe(StateId s, std::size_t episode) const {
  if (fully_occupied(s, episode)) return 0.0;
  const auto capacity = static_cast<std::uint64_t>(road_->capacity(s));
  if (noise_ == 0.0) return static_cast<double>(capacity);
  std::uint64_t occupied = 0;
  for (std::uint64_t space = 0; space < capacity; ++space) {
    if (unit_draw(seed_, episode, s, space) < noise_) ++occupied;
  }
  return static_cast<double>(capacity - occupied);
}

AvailabilitySnapshot ParkingEnvironment::snapshot(std::size_t episode) const {
  AvailabilitySnapshot nu(road_->mdp.state_count());
  for (StateId s = 0; s < nu.size(); ++s) nu[s] = observe(s, episode);
  return nu;
}

}  // namespace parkroute
