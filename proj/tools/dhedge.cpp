// dhedge: command-line entry point for the hedging pipeline.

#include <iostream>

#include "CLI11.hpp"

#include "deephedge/cli/commands.hpp"
#include "deephedge/errors.hpp"

namespace {

using dhedge::cli::Options;

struct Flags {
  std::string config;
  std::string ckpt;
  std::string resume;
  std::string split = "test";
  bool deterministic = false;
  std::uint64_t seed = 0;
  std::string out = "out";
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "Run configuration (JSON)");
  sub->add_option("--seed", f.seed, "Master seed override");
  sub->add_option("--out", f.out, "Output directory")->capture_default_str();
}

void add_policy_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--ckpt", f.ckpt, "Checkpoint file")->required();
  sub->add_option("--split", f.split, "Split to evaluate")
      ->check(CLI::IsMember({"train", "valid", "test", "all"}))
      ->capture_default_str();
  sub->add_flag("--deterministic", f.deterministic, "Act with the mean action instead of sampling");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Option-implied hedging overlay: data, training and evaluation pipeline"};
  app.require_subcommand(1);
  Flags f;

  auto* synth = app.add_subcommand("synth", "Write a synthetic input CSV");
  auto* build = app.add_subcommand("build-panel", "Build the feature panel and fit normalization on train");
  auto* train = app.add_subcommand("train", "Train the actor-critic agent for each configured seed");
  auto* evaluate = app.add_subcommand("evaluate", "Replay a checkpoint and the baselines on a split");
  auto* sweep = app.add_subcommand("sweep", "Retrain over the cadence x slippage grid");
  auto* blend = app.add_subcommand("blend", "Blend the policy with long SPY");
  auto* stats = app.add_subcommand("stats", "Sharpe confidence intervals and regime tables");

  for (auto* sub : {synth, build, train, evaluate, sweep, blend, stats}) add_common(sub, f);
  train->add_option("--resume", f.resume, "Continue training from a checkpoint");
  for (auto* sub : {evaluate, blend, stats}) add_policy_flags(sub, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Options opt;
    if (!f.config.empty()) opt.config = dhedge::cli::load_run_config(f.config);
    if (!f.ckpt.empty()) opt.ckpt = f.ckpt;
    if (!f.resume.empty()) opt.resume = f.resume;
    opt.split = f.split;
    opt.deterministic = f.deterministic;
    for (auto* sub : app.get_subcommands()) {
      if (sub->count("--seed") > 0) opt.seed = f.seed;
    }
    opt.out = f.out;

    const auto* sub = app.get_subcommands().front();
    if (sub == synth) {
      dhedge::cli::cmd_synth(opt);
    } else if (sub == build) {
      dhedge::cli::cmd_build_panel(opt);
    } else if (sub == train) {
      dhedge::cli::cmd_train(opt);
    } else if (sub == evaluate) {
      dhedge::cli::cmd_evaluate(opt);
    } else if (sub == sweep) {
      dhedge::cli::cmd_sweep(opt);
    } else if (sub == blend) {
      dhedge::cli::cmd_blend(opt);
    } else {
      dhedge::cli::cmd_stats(opt);
    }
  } catch (const std::exception& e) {
    std::cerr << "dhedge: " << e.what() << '\n';
    return dhedge::cli::exit_code_for(e);
  }
  return 0;
}
