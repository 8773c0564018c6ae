#include "deephedge/agent/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "deephedge/agent/distribution.hpp"
#include "deephedge/agent/gae.hpp"
#include "deephedge/analytics/metrics.hpp"
#include "deephedge/errors.hpp"

namespace dhedge::agent {

void TrainConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("train: gamma must be in (0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) throw ConfigError("train: gae_lambda must be in [0, 1]");
  if (!(grad_clip > 0.0)) throw ConfigError("train: grad_clip must be positive");
  if (!(entropy_coef >= 0.0)) throw ConfigError("train: entropy_coef must be non-negative");
  if (!(lr0 > 0.0) || !(lr_min >= 0.0) || lr_min > lr0) throw ConfigError("train: need 0 <= lr_min <= lr0, lr0 > 0");
  if (updates_total < 1) throw ConfigError("train: updates_total must be >= 1");
  if (eval_every < 1) throw ConfigError("train: eval_every must be >= 1");
  if (hidden < 1) throw ConfigError("train: hidden must be >= 1");
  if (!std::isfinite(init_log_std)) throw ConfigError("train: init_log_std must be finite");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw ConfigError("train: Adam betas must be in [0, 1)");
  }
  if (!(adam_eps > 0.0)) throw ConfigError("train: adam_eps must be positive");
}

double TrainConfig::lr_at(int update) const {
  const double progress = updates_total > 1 ? static_cast<double>(update - 1) / (updates_total - 1) : 1.0;
  const double p = std::clamp(progress, 0.0, 1.0);
  return lr_min + 0.5 * (lr0 - lr_min) * (1.0 + std::cos(std::numbers::pi * p));
}

bool Checkpoint::operator==(const Checkpoint& o) const {
  auto same = [](double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; };
  return params == o.params && update == o.update && same(valid_sharpe, o.valid_sharpe) &&
         same(train_sharpe, o.train_sharpe) && train == o.train && env == o.env &&
         feature_fingerprint == o.feature_fingerprint && env_fingerprint == o.env_fingerprint && adam == o.adam;
}

AgentPolicy::AgentPolicy(PolicyParams params, std::string name) : params_(std::move(params)), name_(std::move(name)) {}

double AgentPolicy::act(const env::PolicyContext& ctx, Rng* rng) const {
  const PolicyOutput out = forward(params_, ctx.obs.values);
  const SquashedGaussian dist{out.mean, out.log_std, ctx.pos_limit};
  if (rng == nullptr) return dist.deterministic_action();
  std::normal_distribution<double> normal(0.0, 1.0);
  return dist.sample(normal(*rng)).action;
}

std::string train_log_header() {
  return "update,lr,episode,actor_loss,critic_loss,entropy,grad_norm,episode_reward_bps,train_sharpe,valid_sharpe,"
         "status";
}

std::string format_train_log_row(const TrainLogRow& r) {
  std::ostringstream os;
  os << r.update << ',' << format_double(r.lr) << ',' << r.episode << ',' << format_double(r.actor_loss) << ','
     << format_double(r.critic_loss) << ',' << format_double(r.entropy) << ',' << format_double(r.grad_norm) << ','
     << format_double(r.episode_reward_bps) << ',' << format_double(r.train_sharpe) << ','
     << format_double(r.valid_sharpe) << ',' << r.status;
  return os.str();
}

double deterministic_sharpe(const env::Policy& policy, const data::FeaturePanel& split, const data::NormStats& stats,
                            const env::EnvConfig& cfg) {
  env::HedgingEnv env(split, stats, cfg.contiguous(split.size()));
  const auto traces = env::rollout(policy, env, true);
  return analytics::annualized_sharpe(env::rewards_of(traces)).value;
}

namespace {

struct EpisodeData {
  Batch batch;
  std::vector<double> rewards;
  Eigen::VectorXd values;
};

// Stochastic rollout of one episode recording what the update needs.
EpisodeData collect(const PolicyParams& params, env::HedgingEnv& env, std::size_t episode, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(env.steps_per_episode());
  EpisodeData d;
  d.batch.obs.resize(n, env.observation_dim());
  d.batch.pre_squash.resize(n);
  d.batch.a_max = env.config().pos_limit;
  d.values.resize(n + 1);
  d.values[n] = 0.0;
  d.rewards.reserve(static_cast<std::size_t>(n));
  std::normal_distribution<double> normal(0.0, 1.0);

  env::Observation obs = env.reset(episode);
  for (Eigen::Index t = 0; t < n; ++t) {
    const PolicyOutput out = forward(params, obs.values);
    const SquashedGaussian dist{out.mean, out.log_std, d.batch.a_max};
    const auto s = dist.sample(normal(rng));
    d.batch.obs.row(t) = obs.values.transpose();
    d.batch.pre_squash[t] = s.pre_squash;
    d.values[t] = out.value;
    env::StepResult r = env.step(s.action);
    d.rewards.push_back(r.outcome.reward);
    if (r.done) break;
    obs = std::move(r.obs);
  }
  return d;
}

std::size_t scheduled_episode(std::uint64_t seed, int update, std::size_t n_episodes) {
  const auto idx = static_cast<std::size_t>(update - 1);
  const std::size_t epoch = idx / n_episodes;
  std::vector<std::size_t> order(n_episodes);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = make_rng(seed, (std::uint64_t{1} << 40) + epoch);
  std::shuffle(order.begin(), order.end(), rng);
  return order[idx % n_episodes];
}

}  // namespace

TrainResult train(const data::PanelSplits& splits, const data::NormStats& stats, const env::EnvConfig& env_cfg,
                  const TrainConfig& cfg, const Checkpoint* resume,
                  const std::function<void(const TrainLogRow&)>& on_row) {
  cfg.validate();
  env_cfg.validate();
  if (splits.train.empty()) throw InsufficientDataError("train: training split is empty");
  env::HedgingEnv env(splits.train, stats, env_cfg);
  const std::size_t n_episodes = env.num_episodes();
  if (n_episodes == 0) {
    throw InsufficientDataError("train: training split has " + std::to_string(splits.train.size()) +
                                " rows, fewer than one episode of " + std::to_string(env_cfg.episode_len));
  }
  if (splits.valid.size() <= static_cast<std::size_t>(env_cfg.window) + 1) {
    throw InsufficientDataError("train: validation split too short to evaluate");
  }

  const std::string feature_fp = data::fingerprint(stats);
  const std::string env_fp = env::fingerprint(env_cfg);

  Checkpoint current;
  current.train = cfg;
  current.env = env_cfg;
  current.feature_fingerprint = feature_fp;
  current.env_fingerprint = env_fp;
  AdamState adam;

  TrainResult result;
  bool have_best = false;
  if (resume != nullptr) {
    if (resume->feature_fingerprint != feature_fp) {
      throw IncompatibleError("resume: checkpoint feature fingerprint " + resume->feature_fingerprint +
                              " does not match " + feature_fp);
    }
    if (resume->env_fingerprint != env_fp) {
      throw IncompatibleError("resume: checkpoint env fingerprint " + resume->env_fingerprint + " does not match " +
                              env_fp);
    }
    if (!resume->adam) throw IncompatibleError("resume: checkpoint carries no optimizer state");
    if (resume->params.input_dim() != env.observation_dim() || resume->params.hidden() != cfg.hidden) {
      throw IncompatibleError("resume: checkpoint network shape does not match the configuration");
    }
    current.params = resume->params;
    current.update = resume->update;
    current.valid_sharpe = resume->valid_sharpe;
    current.train_sharpe = resume->train_sharpe;
    adam = *resume->adam;
    result.best = *resume;
    result.best.train = cfg;
    have_best = std::isfinite(resume->valid_sharpe);
  } else {
    Rng init_rng = make_rng(cfg.seed, std::uint64_t{1} << 41);
    current.params = PolicyParams::init(env.observation_dim(), cfg.hidden, cfg.init_log_std, init_rng);
    const auto n = current.params.num_params();
    adam.m = Eigen::VectorXd::Zero(n);
    adam.v = Eigen::VectorXd::Zero(n);
  }

  bool evaluated = false;
  for (int u = current.update + 1; u <= cfg.updates_total; ++u) {
    TrainLogRow row;
    row.update = u;
    row.lr = cfg.lr_at(u);
    row.episode = scheduled_episode(cfg.seed, u, n_episodes);

    Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(u));
    EpisodeData d = collect(current.params, env, row.episode, rng);
    row.episode_reward_bps = std::accumulate(d.rewards.begin(), d.rewards.end(), 0.0);
    const GaeResult gae = compute_gae(d.rewards, std::span<const double>(d.values.data(), d.values.size()),
                                      cfg.gamma, cfg.gae_lambda);
    d.batch.advantages = Eigen::Map<const Eigen::VectorXd>(gae.advantages.data(),
                                                           static_cast<Eigen::Index>(gae.advantages.size()));
    d.batch.returns =
        Eigen::Map<const Eigen::VectorXd>(gae.returns.data(), static_cast<Eigen::Index>(gae.returns.size()));
    normalize_advantages(d.batch.advantages);

    LossResult lr = loss_and_grads(current.params, d.batch, cfg.entropy_coef, cfg.grad_clip);
    row.actor_loss = lr.terms.actor;
    row.critic_loss = lr.terms.critic;
    row.entropy = lr.terms.entropy;
    row.grad_norm = lr.terms.grad_norm;
    if (!lr.terms.finite) {
      row.status = "skipped_nonfinite_loss";
    } else {
      const Eigen::VectorXd g = lr.grads.flatten();
      adam.step += 1;
      adam.m = cfg.adam_beta1 * adam.m + (1.0 - cfg.adam_beta1) * g;
      adam.v = cfg.adam_beta2 * adam.v + (1.0 - cfg.adam_beta2) * g.cwiseProduct(g);
      const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(adam.step));
      const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(adam.step));
      Eigen::VectorXd theta = current.params.flatten();
      theta.array() -= row.lr * (adam.m.array() / bc1) / ((adam.v.array() / bc2).sqrt() + cfg.adam_eps);
      current.params.unflatten(theta);
      current.params.log_std = std::clamp(current.params.log_std, kLogStdMin, kLogStdMax);
    }
    current.update = u;

    const bool final_without_eval = u == cfg.updates_total && !evaluated && !have_best;
    if (u % cfg.eval_every == 0 || final_without_eval) {
      evaluated = true;
      const AgentPolicy policy(current.params);
      row.train_sharpe = deterministic_sharpe(policy, splits.train, stats, env_cfg);
      row.valid_sharpe = deterministic_sharpe(policy, splits.valid, stats, env_cfg);
      current.train_sharpe = row.train_sharpe;
      current.valid_sharpe = row.valid_sharpe;
      if (!have_best || row.valid_sharpe > result.best.valid_sharpe) {
        have_best = true;
        result.best = current;
        result.best.adam = adam;
      }
    }
    result.log.push_back(row);
    if (on_row) on_row(row);
  }

  current.adam = adam;
  result.last = current;
  if (!have_best) result.best = current;
  return result;
}

}  // namespace dhedge::agent
