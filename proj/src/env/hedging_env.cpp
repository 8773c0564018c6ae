#include "deephedge/hedging_env.hpp"

#include <algorithm>
#include <cmath>

#include "deephedge/errors.hpp"

namespace dhedge::env {

void EnvConfig::validate() const {
  if (window < 1) throw ConfigError("env: window must be >= 1");
  if (!(pos_limit > 0.0)) throw ConfigError("env: pos_limit must be positive");
  if (!(cost_bps >= 0.0) || !(slippage_bps >= 0.0)) throw ConfigError("env: costs must be non-negative");
  if (!(psi >= 0.0) || !(lambda >= 0.0)) throw ConfigError("env: impact coefficients must be non-negative");
  if (rebalance_every < 1) throw ConfigError("env: rebalance_every must be >= 1");
  if (episode_len <= window) throw ConfigError("env: episode_len must exceed window");
  if (episode_stride < 1) throw ConfigError("env: episode_stride must be >= 1");
  if (!(reward_scale > 0.0)) throw ConfigError("env: reward_scale must be positive");
}

std::size_t EnvConfig::num_episodes(std::size_t rows) const {
  const auto len = static_cast<std::size_t>(episode_len);
  if (rows < len) return 0;
  return (rows - len) / static_cast<std::size_t>(episode_stride) + 1;
}

EnvConfig EnvConfig::contiguous(std::size_t rows) const {
  EnvConfig c = *this;
  c.episode_len = static_cast<int>(rows);
  c.episode_stride = static_cast<int>(rows);
  return c;
}

std::string fingerprint(const EnvConfig& c) {
  std::string canon = "window=" + std::to_string(c.window) + ";pos_limit=" + format_double(c.pos_limit) +
                      ";cost_bps=" + format_double(c.cost_bps) + ";slippage_bps=" + format_double(c.slippage_bps) +
                      ";rebalance_every=" + std::to_string(c.rebalance_every) + ";psi=" + format_double(c.psi) +
                      ";lambda=" + format_double(c.lambda) + ";reward_scale=" + format_double(c.reward_scale) +
                      ";episode_len=" + std::to_string(c.episode_len) +
                      ";episode_stride=" + std::to_string(c.episode_stride);
  return hex64(fnv1a64(canon));
}

double step_cost(const EnvConfig& cfg, double position, double trade) {
  return (cfg.cost_bps + cfg.slippage_bps) * 1e-4 * std::abs(trade) + 0.5 * cfg.psi * trade * trade +
         cfg.lambda * position * trade;
}

HedgingEnv::HedgingEnv(const data::FeaturePanel& panel, const data::NormStats& stats, EnvConfig cfg)
    : panel_(&panel), normalized_(data::apply_norm(panel, stats)), cfg_(cfg) {
  cfg_.validate();
}

Observation HedgingEnv::reset(std::size_t episode) {
  if (episode >= num_episodes()) {
    throw ValidationError("reset: episode " + std::to_string(episode) + " out of range (" +
                          std::to_string(num_episodes()) + " episodes in a split of " +
                          std::to_string(panel_->size()) + " rows)");
  }
  start_ = episode * static_cast<std::size_t>(cfg_.episode_stride);
  step_ = 0;
  position_ = 0.0;
  active_ = true;
  done_ = false;
  return observe();
}

Observation HedgingEnv::observe() const {
  Observation obs;
  obs.window = cfg_.window;
  obs.features = normalized_.cols();
  obs.values.resize(observation_dim());
  const auto first = static_cast<Eigen::Index>(current_row()) - cfg_.window + 1;
  for (Eigen::Index w = 0; w < cfg_.window; ++w) {
    obs.values.segment(w * obs.features, obs.features) = normalized_.row(first + w).transpose();
  }
  obs.values[obs.values.size() - 1] = position_;
  return obs;
}

StepResult HedgingEnv::step(double requested_action) {
  if (!active_) throw ProtocolError("step called before reset");
  if (done_) throw ProtocolError("step called after the episode finished");
  if (!std::isfinite(requested_action)) throw ValidationError("step: requested action is not finite");

  StepOutcome out;
  out.t = step_;
  out.row = current_row();
  out.date = (*panel_)[out.row].date;
  out.executed = step_ % static_cast<std::size_t>(cfg_.rebalance_every) == 0;
  const double target = std::clamp(requested_action, -cfg_.pos_limit, cfg_.pos_limit);
  out.position = out.executed ? target : position_;
  out.trade = out.executed ? out.position - position_ : 0.0;
  out.ret_fwd = finite_or_zero((*panel_)[out.row].ret_fwd);
  out.cost = step_cost(cfg_, out.position, out.trade);
  out.pnl = out.position * out.ret_fwd - out.cost;
  out.reward = cfg_.reward_scale * out.pnl;

  position_ = out.position;
  ++step_;
  done_ = step_ >= steps_per_episode();
  StepResult result;
  result.outcome = out;
  result.done = done_;
  if (!done_) result.obs = observe();
  return result;
}

EpisodeTrace run_episode(const Policy& policy, HedgingEnv& env, std::size_t episode, Rng* rng) {
  EpisodeTrace trace;
  trace.episode = episode;
  trace.steps.reserve(env.steps_per_episode());
  Observation obs = env.reset(episode);
  while (true) {
    const PolicyContext ctx{obs, env.panel(), env.current_row(), env.position(), env.config().pos_limit};
    StepResult r = env.step(policy.act(ctx, rng));
    trace.steps.push_back(r.outcome);
    if (r.done) break;
    obs = std::move(r.obs);
  }
  trace.done = true;
  return trace;
}

std::vector<EpisodeTrace> rollout(const Policy& policy, HedgingEnv& env, bool deterministic, std::uint64_t seed) {
  std::vector<EpisodeTrace> traces;
  traces.reserve(env.num_episodes());
  for (std::size_t e = 0; e < env.num_episodes(); ++e) {
    if (deterministic) {
      traces.push_back(run_episode(policy, env, e, nullptr));
    } else {
      Rng rng = make_rng(seed, e);
      traces.push_back(run_episode(policy, env, e, &rng));
    }
  }
  return traces;
}

std::vector<double> rewards_of(const std::vector<EpisodeTrace>& traces) {
  std::vector<double> out;
  for (const auto& tr : traces) {
    for (const auto& s : tr.steps) out.push_back(s.reward);
  }
  return out;
}

}  // namespace dhedge::env
