#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "parkroute/config.hpp"
#include "parkroute/errors.hpp"
#include "parkroute/harness.hpp"
#include "parkroute/text.hpp"

namespace fs = std::filesystem;
using namespace parkroute;

namespace {

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> realisations;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help, CommonArgs& args,
                      const std::string& default_out) {
  CLI::App* cmd = app.add_subcommand(name, help);
  cmd->add_option("config", args.config, "key = value config file (defaults are built in)");
  cmd->add_option("--seed", args.seed, "base seed");
  args.out_dir = default_out;
  cmd->add_option("--out-dir", args.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--threads", args.threads, "worker threads, 0 = all cores");
  cmd->add_option("--realisations", args.realisations, "override the realisation count");
  return cmd;
}

ExperimentConfig resolve(const CommonArgs& args, ExperimentConfig base) {
  ExperimentConfig cfg = args.config.empty() ? std::move(base) : load_config(args.config, std::move(base));
  if (args.seed) cfg.seed = *args.seed;
  if (args.threads) cfg.threads = *args.threads;
  if (args.realisations) cfg.realisations = *args.realisations;
  return cfg;
}

void save_config(const ExperimentConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream out(dir / "config.txt", std::ios::binary);
  if (!out) throw IoError("cannot write " + (dir / "config.txt").string());
  write_config(cfg, out);
}

std::string route_text(const std::vector<EdgeId>& route) {
  std::string out;
  for (EdgeId id : route) out += (out.empty() ? "" : " ") + std::to_string(id);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parking-aware route learning experiments"};
  app.require_subcommand(1);

  CommonArgs alpha_args, net_args, e1, e2, e3;
  CLI::App* alpha_cmd = add_command(app, "alpha-min", "smallest alpha without negative cycles", alpha_args, "");
  double step = 0.01;
  alpha_cmd->add_option("--step", step, "grid step")->capture_default_str();
  CLI::App* net_cmd = add_command(app, "gen-net", "write the configured network as an edge list", net_args, "out");
  CLI::App* exp1_cmd = add_command(app, "exp1", "adaptation to alternating full parking", e1, "out/exp1");
  CLI::App* exp2_cmd = add_command(app, "exp2", "moving window on versus off", e2, "out/exp2");
  CLI::App* exp3_cmd = add_command(app, "exp3", "token-count sweep with a test vehicle", e3, "out/exp3");

  std::function<void()> action;
  alpha_cmd->callback([&] {
    action = [&] {
      ExperimentConfig cfg = resolve(alpha_args, default_experiment1());
      // For network commands the seed selects the generated grid.
      if (alpha_args.seed) cfg.grid.seed = *alpha_args.seed;
      const double a = find_alpha_min(load_network(cfg), step);
      std::printf("alpha_min %s\n", format_fixed(a, 2).c_str());
      if (!alpha_args.out_dir.empty()) {
        fs::create_directories(alpha_args.out_dir);
        std::ofstream(fs::path(alpha_args.out_dir) / "alpha_min.txt") << format_fixed(a, 2) << '\n';
      }
    };
  });
  net_cmd->callback([&] {
    action = [&] {
      ExperimentConfig cfg = resolve(net_args, default_experiment1());
      if (net_args.seed) cfg.grid.seed = *net_args.seed;
      const RoadNetwork net = load_network(cfg);
      fs::create_directories(net_args.out_dir);
      const fs::path path = fs::path(net_args.out_dir) / "network.csv";
      save_edge_list(net, path);
      std::printf("%zu nodes, %zu edges -> %s\n", net.node_count(), net.edge_count(), path.string().c_str());
    };
  });
  exp1_cmd->callback([&] {
    action = [&] {
      const ExperimentConfig cfg = resolve(e1, default_experiment1());
      const Experiment1Result res = run_experiment1(cfg);
      save_config(cfg, e1.out_dir);
      write_outputs(res, e1.out_dir);
      const auto s = summarize(res);
      std::printf("default route: %s\n", route_text(res.default_route).c_str());
      std::printf("persistent AP in Full intervals: %.3f, back to DP in Free intervals: %.3f\n",
                  s["adapted_share"].get<double>(), s["returned_share"].get<double>());
      std::printf("outputs in %s\n", e1.out_dir.c_str());
    };
  });
  exp2_cmd->callback([&] {
    action = [&] {
      const ExperimentConfig cfg = resolve(e2, default_experiment2());
      const Experiment2Result res = run_experiment2(cfg);
      save_config(cfg, e2.out_dir);
      write_outputs(res, e2.out_dir);
      std::printf("median episodes to first AP: with window %.1f, without %.1f\n",
                  median(std::vector<double>(res.with_mwrm.first_ap.begin(), res.with_mwrm.first_ap.end())),
                  median(std::vector<double>(res.without_mwrm.first_ap.begin(), res.without_mwrm.first_ap.end())));
      std::printf("median DP share in first Full interval: with %.3f, without %.3f\n",
                  median(res.with_mwrm.dp_share), median(res.without_mwrm.dp_share));
      std::printf("outputs in %s\n", e2.out_dir.c_str());
    };
  });
  exp3_cmd->callback([&] {
    action = [&] {
      const ExperimentConfig cfg = resolve(e3, default_experiment3());
      const Experiment3Result res = run_experiment3(cfg);
      save_config(cfg, e3.out_dir);
      write_outputs(res, e3.out_dir);
      for (const TokenSweepPoint& pt : res.points) {
        std::printf("M=%zu median episodes to learn %.1f, to return %.1f\n", pt.tokens, pt.median_learn,
                    pt.median_return);
      }
      std::printf("outputs in %s\n", e3.out_dir.c_str());
    };
  });

  CLI11_PARSE(app, argc, argv);
  try {
    action();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
