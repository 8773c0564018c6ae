#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "deephedge/agent/network.hpp"
#include "deephedge/hedging_env.hpp"
#include "deephedge/market_data.hpp"

namespace dhedge::agent {

struct TrainConfig {
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double entropy_coef = 0.01;
  double grad_clip = 1.0;
  double lr0 = 3e-4;
  double lr_min = 1e-5;
  int updates_total = 1000;
  int eval_every = 50;
  std::uint64_t seed = 0;
  int hidden = 256;
  double init_log_std = -0.5;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  void validate() const;
  // Cosine-annealed rate for 1-based update u.
  double lr_at(int update) const;
  bool operator==(const TrainConfig&) const = default;
};

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  std::int64_t step = 0;

  bool operator==(const AdamState& o) const { return step == o.step && m == o.m && v == o.v; }
};

struct Checkpoint {
  PolicyParams params;
  int update = 0;
  double valid_sharpe = kMissing;
  double train_sharpe = kMissing;
  TrainConfig train;
  env::EnvConfig env;
  std::string feature_fingerprint;
  std::string env_fingerprint;
  std::optional<AdamState> adam;

  bool operator==(const Checkpoint& o) const;
};

// Stateless wrapper that acts with a frozen parameter snapshot; a_max is the
// environment's position limit.
class AgentPolicy final : public env::Policy {
 public:
  explicit AgentPolicy(PolicyParams params, std::string name = "agent");
  double act(const env::PolicyContext& ctx, Rng* rng) const override;
  std::string name() const override { return name_; }
  const PolicyParams& params() const { return params_; }

 private:
  PolicyParams params_;
  std::string name_;
};

// One row per update. Sharpe columns are missing except on evaluation updates.
struct TrainLogRow {
  int update = 0;
  double lr = 0.0;
  std::size_t episode = 0;
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double entropy = 0.0;
  double grad_norm = 0.0;
  double episode_reward_bps = 0.0;
  double train_sharpe = kMissing;
  double valid_sharpe = kMissing;
  std::string status = "ok";
};

std::string train_log_header();
std::string format_train_log_row(const TrainLogRow& row);

struct TrainResult {
  Checkpoint best;
  Checkpoint last;
  std::vector<TrainLogRow> log;
};

// Deterministic annualized Sharpe of `policy` replayed once through the whole split.
double deterministic_sharpe(const env::Policy& policy, const data::FeaturePanel& split, const data::NormStats& stats,
                            const env::EnvConfig& cfg);

// On-policy actor-critic training: one sampled episode and one Adam step per
// update, deterministic evaluation every eval_every updates (and at the last
// update when none fell on it), best checkpoint by strictly greater validation
// Sharpe. `resume` continues from a checkpoint carrying optimizer state.
TrainResult train(const data::PanelSplits& splits, const data::NormStats& stats, const env::EnvConfig& env_cfg,
                  const TrainConfig& cfg, const Checkpoint* resume = nullptr,
                  const std::function<void(const TrainLogRow&)>& on_row = {});

}  // namespace dhedge::agent
