#include "parkroute/config.hpp"

#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "parkroute/errors.hpp"
#include "parkroute/text.hpp"

namespace parkroute {
namespace {

bool parse_bool(std::string_view v) {
  v = trim(v);
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw ConfigError("not a boolean: '" + std::string(v) + "'");
}

template <typename T>
std::vector<T> parse_list(std::string_view v) {
  std::vector<T> out;
  if (trim(v).empty()) return out;
  for (std::string_view item : split(v, ',')) out.push_back(parse_number<T>(item));
  return out;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += format_fixed(values[i], 6);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

// Two consecutive default-route links of the shipped grid.
const std::vector<EdgeId> kFullArea{162, 191};

std::vector<FullPaSchedule> alternating(const std::vector<EdgeId>& edges, std::size_t free_len,
                                        std::size_t full_len, std::size_t episodes) {
  std::vector<FullPaSchedule> out;
  for (std::size_t start = free_len + 1; start <= episodes; start += free_len + full_len) {
    out.push_back({edges, start, std::min(episodes, start + full_len - 1)});
  }
  return out;
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (auto hash = view.find(" #"); hash != std::string_view::npos) view = trim(view.substr(0, hash));
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = trim(view.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    out.emplace_back(std::string(key), std::string(trim(view.substr(eq + 1))));
  }
  return out;
}

ExperimentConfig default_experiment1() {
  ExperimentConfig cfg;
  cfg.episodes = 200;
  cfg.schedules = alternating(kFullArea, 20, 20, cfg.episodes);
  return cfg;
}

ExperimentConfig default_experiment2() {
  ExperimentConfig cfg;
  cfg.episodes = 145;
  cfg.schedules = {{kFullArea, 61, 75}, {kFullArea, 86, 145}};
  return cfg;
}

ExperimentConfig default_experiment3() {
  ExperimentConfig cfg;
  cfg.episodes = 80;
  cfg.uniform_origins = true;
  cfg.origins.clear();
  cfg.test_origin = 0;
  cfg.noise = 0.02;
  cfg.schedules = {{kFullArea, 25, 45}};
  return cfg;
}

void apply_key_values(ExperimentConfig& cfg, const KeyValues& entries,
                      const std::filesystem::path& base_dir) {
  using Setter = std::function<void(const std::string&)>;
  bool schedules_replaced = false;
  auto add_schedules = [&](std::vector<FullPaSchedule> more) {
    if (!schedules_replaced) cfg.schedules.clear();
    schedules_replaced = true;
    cfg.schedules.insert(cfg.schedules.end(), more.begin(), more.end());
  };
  auto path_of = [&](const std::string& v) {
    std::filesystem::path p(v);
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };

  const std::map<std::string, Setter> setters = {
      {"network.file", [&](const std::string& v) { cfg.network_file = v.empty() ? "" : path_of(v); }},
      {"grid.rows", [&](const std::string& v) { cfg.grid.rows = parse_number<std::size_t>(v); }},
      {"grid.cols", [&](const std::string& v) { cfg.grid.cols = parse_number<std::size_t>(v); }},
      {"grid.edge_length_m", [&](const std::string& v) { cfg.grid.edge_length_m = parse_number<double>(v); }},
      {"grid.capacities", [&](const std::string& v) { cfg.grid.capacity_choices = parse_list<std::uint32_t>(v); }},
      {"grid.seed", [&](const std::string& v) { cfg.grid.seed = parse_number<std::uint64_t>(v); }},
      {"destination", [&](const std::string& v) { cfg.destination = parse_number<EdgeId>(v); }},
      {"origins", [&](const std::string& v) { cfg.origins = parse_list<EdgeId>(v); }},
      {"origin_mode",
       [&](const std::string& v) {
         if (v == "fixed") cfg.uniform_origins = false;
         else if (v == "uniform") cfg.uniform_origins = true;
         else throw ConfigError("origin_mode must be fixed or uniform");
       }},
      {"test_origin", [&](const std::string& v) { cfg.test_origin = parse_number<EdgeId>(v); }},
      {"alpha", [&](const std::string& v) { cfg.alpha = parse_number<double>(v); }},
      {"beta_default", [&](const std::string& v) { cfg.beta_default = parse_number<double>(v); }},
      {"beta_alternative", [&](const std::string& v) { cfg.beta_alternative = parse_number<double>(v); }},
      {"horizon", [&](const std::string& v) { cfg.mdp.horizon = parse_number<std::size_t>(v); }},
      {"merge_chains", [&](const std::string& v) { cfg.mdp.merge_chains = parse_bool(v); }},
      {"forbid_u_turns", [&](const std::string& v) { cfg.mdp.forbid_u_turns = parse_bool(v); }},
      {"epsilon", [&](const std::string& v) { cfg.learner.epsilon = parse_number<double>(v); }},
      {"delta", [&](const std::string& v) { cfg.learner.delta = parse_number<double>(v); }},
      {"window", [&](const std::string& v) { cfg.learner.window = parse_number<std::size_t>(v); }},
      {"tokens", [&](const std::string& v) { cfg.learner.tokens = parse_number<std::size_t>(v); }},
      {"r_max", [&](const std::string& v) { cfg.learner.r_max = parse_number<double>(v); }},
      {"phi_min", [&](const std::string& v) { cfg.learner.phi_min = parse_number<double>(v); }},
      {"gamma_min", [&](const std::string& v) { cfg.learner.gamma_min = parse_number<double>(v); }},
      {"gamma", [&](const std::string& v) { cfg.learner.gamma = parse_list<double>(v); }},
      {"mwrm", [&](const std::string& v) { cfg.learner.mwrm = parse_bool(v); }},
      {"normalize_by_gamma_sum",
       [&](const std::string& v) { cfg.learner.normalize_by_gamma_sum = parse_bool(v); }},
      {"noise", [&](const std::string& v) { cfg.noise = parse_number<double>(v); }},
      {"schedule",
       [&](const std::string& v) {
         std::istringstream line(v);
         add_schedules(read_schedules(line));
       }},
      {"schedules",
       [&](const std::string& v) {
         if (v != "none") throw ConfigError("only 'none' is accepted; list entries with 'schedule'");
         add_schedules({});
       }},
      {"schedule_file", [&](const std::string& v) { add_schedules(load_schedules(path_of(v))); }},
      {"episodes", [&](const std::string& v) { cfg.episodes = parse_number<std::size_t>(v); }},
      {"realisations", [&](const std::string& v) { cfg.realisations = parse_number<std::size_t>(v); }},
      {"seed", [&](const std::string& v) { cfg.seed = parse_number<std::uint64_t>(v); }},
      {"threads", [&](const std::string& v) { cfg.threads = parse_number<std::size_t>(v); }},
      {"token_counts", [&](const std::string& v) { cfg.token_counts = parse_list<std::size_t>(v); }},
  };

  for (const auto& [key, value] : entries) {
    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    try {
      it->second(value);
    } catch (const ConfigError& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  if (!(cfg.noise >= 0.0 && cfg.noise <= 1.0)) throw ConfigError("noise must lie in [0, 1]");
  if (cfg.episodes == 0) throw ConfigError("episodes must be positive");
  if (cfg.realisations == 0) throw ConfigError("realisations must be positive");
  if (!(cfg.beta_default > 0.0 && cfg.beta_alternative > 0.0)) throw ConfigError("beta must be positive");
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  apply_key_values(base, parse_key_values(in), path.parent_path());
  return base;
}

void write_config(const ExperimentConfig& cfg, std::ostream& out) {
  if (!cfg.network_file.empty()) {
    out << "network.file = " << cfg.network_file.string() << '\n';
  } else {
    out << "grid.rows = " << cfg.grid.rows << '\n'
        << "grid.cols = " << cfg.grid.cols << '\n'
        << "grid.edge_length_m = " << format_fixed(cfg.grid.edge_length_m, 3) << '\n'
        << "grid.capacities = " << join(cfg.grid.capacity_choices) << '\n'
        << "grid.seed = " << cfg.grid.seed << '\n';
  }
  out << "destination = " << cfg.destination << '\n'
      << "origin_mode = " << (cfg.uniform_origins ? "uniform" : "fixed") << '\n'
      << "origins = " << join(cfg.origins) << '\n'
      << "test_origin = " << cfg.test_origin << '\n'
      << "alpha = " << format_fixed(cfg.alpha, 6) << '\n'
      << "beta_default = " << format_fixed(cfg.beta_default, 6) << '\n'
      << "beta_alternative = " << format_fixed(cfg.beta_alternative, 6) << '\n'
      << "horizon = " << cfg.mdp.horizon << '\n'
      << "merge_chains = " << (cfg.mdp.merge_chains ? "true" : "false") << '\n'
      << "forbid_u_turns = " << (cfg.mdp.forbid_u_turns ? "true" : "false") << '\n'
      << "epsilon = " << format_fixed(cfg.learner.epsilon, 6) << '\n'
      << "delta = " << format_fixed(cfg.learner.delta, 6) << '\n'
      << "window = " << cfg.learner.window << '\n'
      << "tokens = " << cfg.learner.tokens << '\n'
      << "r_max = " << format_fixed(cfg.learner.r_max, 6) << '\n'
      << "phi_min = " << format_fixed(cfg.learner.phi_min, 6) << '\n'
      << "gamma_min = " << format_fixed(cfg.learner.gamma_min, 6) << '\n';
  if (!cfg.learner.gamma.empty()) out << "gamma = " << join(cfg.learner.gamma) << '\n';
  out << "mwrm = " << (cfg.learner.mwrm ? "true" : "false") << '\n'
      << "normalize_by_gamma_sum = " << (cfg.learner.normalize_by_gamma_sum ? "true" : "false") << '\n'
      << "noise = " << format_fixed(cfg.noise, 6) << '\n';
  if (cfg.schedules.empty()) out << "schedules = none\n";
  for (const FullPaSchedule& s : cfg.schedules) {
    out << "schedule = " << join(s.edges) << ';' << s.start << ';' << s.end << '\n';
  }
  out << "episodes = " << cfg.episodes << '\n'
      << "realisations = " << cfg.realisations << '\n'
      << "seed = " << cfg.seed << '\n'
      << "threads = " << cfg.threads << '\n'
      << "token_counts = " << join(cfg.token_counts) << '\n';
}

}  // namespace parkroute
