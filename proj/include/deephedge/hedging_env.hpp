#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "deephedge/market_data.hpp"
#include "deephedge/numeric.hpp"

namespace dhedge::env {

struct EnvConfig {
  int window = 10;
  double pos_limit = 2.0;
  double cost_bps = 10.0;      // per unit |position change|
  double slippage_bps = 0.0;   // per unit |position change|, charged on execution
  int rebalance_every = 1;
  double psi = 0.0;            // quadratic temporary impact
  double lambda = 0.0;         // permanent impact
  double reward_scale = 1e4;
  int episode_len = 256;
  int episode_stride = 64;

  void validate() const;
  // floor((rows - L) / stride) + 1, or 0 when rows < L.
  std::size_t num_episodes(std::size_t rows) const;
  // Single episode spanning `rows` rows (used for date-aligned analytics).
  EnvConfig contiguous(std::size_t rows) const;
  bool operator==(const EnvConfig&) const = default;
};

std::string fingerprint(const EnvConfig& cfg);

// Normalized W x F feature window (row-major, oldest row first) followed by
// the previous position as the last entry.
struct Observation {
  Eigen::VectorXd values;
  Eigen::Index window = 0;
  Eigen::Index features = 0;

  double at(Eigen::Index w, Eigen::Index f) const { return values[w * features + f]; }
  double prev_position() const { return values[values.size() - 1]; }
};

struct StepOutcome {
  std::size_t t = 0;    // step index within the episode
  std::size_t row = 0;  // panel row the action is taken at
  Date date;
  double position = 0.0;
  double trade = 0.0;
  double cost = 0.0;
  double pnl = 0.0;
  double reward = 0.0;  // bps
  double ret_fwd = 0.0;
  bool executed = false;
};

struct EpisodeTrace {
  std::size_t episode = 0;
  std::vector<StepOutcome> steps;
  bool done = false;
};

struct StepResult {
  Observation obs;
  StepOutcome outcome;
  bool done = false;
};

// Cost and PnL of one step, in return units. Exposed so reward identities can
// be checked independently of the environment state machine.
double step_cost(const EnvConfig& cfg, double position, double trade);

// Single-threaded episodic state machine over one split. The panel must
// outlive the environment.
class HedgingEnv {
 public:
  HedgingEnv(const data::FeaturePanel& panel, const data::NormStats& stats, EnvConfig cfg);

  std::size_t num_episodes() const { return cfg_.num_episodes(panel_->size()); }
  Eigen::Index observation_dim() const {
    return static_cast<Eigen::Index>(cfg_.window) * static_cast<Eigen::Index>(data::kNumFeatures) + 1;
  }
  std::size_t steps_per_episode() const { return static_cast<std::size_t>(cfg_.episode_len - cfg_.window); }

  Observation reset(std::size_t episode);
  StepResult step(double requested_action);

  bool done() const { return done_; }
  double position() const { return position_; }
  std::size_t current_row() const { return start_ + static_cast<std::size_t>(cfg_.window) - 1 + step_; }
  const EnvConfig& config() const { return cfg_; }
  const data::FeaturePanel& panel() const { return *panel_; }

 private:
  Observation observe() const;

  const data::FeaturePanel* panel_;
  Eigen::MatrixXd normalized_;
  EnvConfig cfg_;
  std::size_t start_ = 0;
  std::size_t step_ = 0;
  double position_ = 0.0;
  bool active_ = false;
  bool done_ = false;
};

struct PolicyContext {
  const Observation& obs;
  const data::FeaturePanel& panel;
  std::size_t row;
  double prev_position;
  double pos_limit;
};

class Policy {
 public:
  virtual ~Policy() = default;
  // rng == nullptr requests the deterministic (mean) action.
  virtual double act(const PolicyContext& ctx, Rng* rng) const = 0;
  virtual std::string name() const = 0;
};

EpisodeTrace run_episode(const Policy& policy, HedgingEnv& env, std::size_t episode, Rng* rng);

// All episodes of the split in order. Stochastic episodes draw from
// make_rng(seed, episode), so results do not depend on evaluation order.
std::vector<EpisodeTrace> rollout(const Policy& policy, HedgingEnv& env, bool deterministic, std::uint64_t seed = 0);

// Per-step rewards (bps) of all traces, concatenated in order.
std::vector<double> rewards_of(const std::vector<EpisodeTrace>& traces);

}  // namespace dhedge::env
