#include "parkroute/records.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "parkroute/errors.hpp"
#include "parkroute/text.hpp"

namespace parkroute {
namespace {

constexpr std::string_view kHeader =
    "realisation,episode,agent_id,label,total_weight,distance_m,availability,success";

constexpr std::array<std::string_view, 4> kNames{"DP", "AP", "OTHER", "INCOMPLETE"};

std::string shortest_fixed(double value) {
  char buf[512];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
  if (ec != std::errc{}) throw IoError("value not representable in fixed notation");
  std::string out(buf, ptr);
  if (out == "-0") out = "0";
  return out;
}

}  // namespace

std::string_view label_name(RouteLabel label) { return kNames[static_cast<std::size_t>(label)]; }

RouteLabel parse_label(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<RouteLabel>(i);
  }
  throw ConfigError("unknown route label '" + std::string(name) + "'");
}

char label_code(RouteLabel label) { return "DAOI"[static_cast<std::size_t>(label)]; }

bool same_row(const EpisodeRecord& a, const EpisodeRecord& b) {
  return a.realisation == b.realisation && a.episode == b.episode && a.agent_id == b.agent_id &&
         a.label == b.label && a.total_weight == b.total_weight && a.distance_m == b.distance_m &&
         a.availability == b.availability && a.success == b.success;
}

void write_csv(const std::vector<EpisodeRecord>& records, std::ostream& out) {
  out << kHeader << '\n';
  for (const EpisodeRecord& r : records) {
    out << r.realisation << ',' << r.episode << ',' << r.agent_id << ',' << label_name(r.label) << ','
        << shortest_fixed(r.total_weight) << ',' << shortest_fixed(r.distance_m) << ','
        << shortest_fixed(r.availability) << ',' << (r.success ? 1 : 0) << '\n';
  }
}

void emit_csv(const std::vector<EpisodeRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv(records, out);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<EpisodeRecord> read_csv(std::istream& in) {
  std::vector<EpisodeRecord> out;
  std::string line;
  if (!std::getline(in, line) || trim(line) != kHeader) throw IoError("missing or unexpected CSV header");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(trim(line), ',');
    if (f.size() != 8) throw IoError("CSV line " + std::to_string(line_no) + ": expected 8 fields");
    EpisodeRecord r;
    r.realisation = parse_number<std::size_t>(f[0]);
    r.episode = parse_number<std::size_t>(f[1]);
    r.agent_id = parse_number<std::int64_t>(f[2]);
    r.label = parse_label(f[3]);
    r.total_weight = parse_number<double>(f[4]);
    r.distance_m = parse_number<double>(f[5]);
    r.availability = parse_number<double>(f[6]);
    r.success = parse_number<int>(f[7]) != 0;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EpisodeRecord> load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_csv(in);
}

}  // namespace parkroute
