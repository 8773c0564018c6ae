#pragma once

// Pipeline commands behind the dhedge executable. Each command reads a
// RunConfig, writes its artifacts atomically under `out`, and drops a
// resolved_config.json with input fingerprints next to them.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "deephedge/agent/trainer.hpp"
#include "deephedge/analytics/regimes.hpp"
#include "deephedge/baselines.hpp"
#include "deephedge/config_json.hpp"
#include "deephedge/hedging_env.hpp"
#include "deephedge/market_data.hpp"
#include "deephedge/synthetic.hpp"

namespace dhedge::cli {

struct SweepOptions {
  std::vector<int> cadences{15, 20, 25};
  std::vector<double> slippages{8.0, 10.0, 15.0, 20.0};
  double pos_limit = 2.0;
  int jobs = 1;
};

struct BlendOptions {
  std::vector<double> weights{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  double attribution_weight = 0.5;
  int rolling_window = 63;
};

struct StatsOptions {
  int block_len = 21;
  int n_resamples = 1000;
  int nw_lag = 21;
  double level = 0.95;
  std::string benchmark = "spy";
  std::vector<analytics::NamedPeriod> periods = analytics::standard_periods();
};

struct RunConfig {
  std::string panel;       // panel CSV written by build-panel
  std::string norm_stats;  // norm_stats.json written by build-panel
  std::string input_csv;   // raw input for build-panel
  std::optional<data::SynthConfig> synth;
  data::SplitSpec split = data::SplitSpec::standard();
  env::EnvConfig env;
  agent::TrainConfig train;
  std::vector<std::uint64_t> seeds{0};
  SweepOptions sweep;
  BlendOptions blend;
  StatsOptions stats;
  env::BaselineParams baselines;
};

config::Json to_json(const RunConfig& c);
// Relative paths are resolved against `base_dir` (the config file's directory).
RunConfig run_config_from_json(const config::Json& j, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

struct Options {
  RunConfig config;
  std::optional<std::filesystem::path> ckpt;
  std::optional<std::filesystem::path> resume;
  std::string split = "test";  // train | valid | test | all
  bool deterministic = false;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "out";
};

void cmd_synth(const Options& opt);
void cmd_build_panel(const Options& opt);
void cmd_train(const Options& opt);
void cmd_evaluate(const Options& opt);
void cmd_sweep(const Options& opt);
void cmd_blend(const Options& opt);
void cmd_stats(const Options& opt);

// Maps an exception from a command to the process exit code (2 validation, 3 incompatibility, 1 other).
int exit_code_for(const std::exception& e);

}  // namespace dhedge::cli
