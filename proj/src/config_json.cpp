#include "deephedge/config_json.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deephedge/errors.hpp"

namespace dhedge::config {

void require_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + ": expected a JSON object");
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ConfigError(std::string(what) + ": unknown key '" + item.key() + "'");
    }
  }
}

namespace {

const Json* member(const Json& j, std::string_view key) {
  const auto it = j.find(std::string(key));
  return it == j.end() ? nullptr : &*it;
}

[[noreturn]] void type_error(std::string_view what, std::string_view key, std::string_view expected) {
  throw ConfigError(std::string(what) + "." + std::string(key) + ": expected " + std::string(expected));
}

}  // namespace

void read(const Json& j, std::string_view key, double& out, std::string_view what) {
  if (const Json* v = member(j, key)) {
    if (!v->is_number()) type_error(what, key, "a number");
    out = v->get<double>();
  }
}

void read(const Json& j, std::string_view key, int& out, std::string_view what) {
  if (const Json* v = member(j, key)) {
    if (!v->is_number_integer()) type_error(what, key, "an integer");
    out = v->get<int>();
  }
}

void read(const Json& j, std::string_view key, std::uint64_t& out, std::string_view what) {
  if (const Json* v = member(j, key)) {
    if (!v->is_number_unsigned()) type_error(what, key, "a non-negative integer");
    out = v->get<std::uint64_t>();
  }
}

void read(const Json& j, std::string_view key, std::string& out, std::string_view what) {
  if (const Json* v = member(j, key)) {
    if (!v->is_string()) type_error(what, key, "a string");
    out = v->get<std::string>();
  }
}

void read(const Json& j, std::string_view key, bool& out, std::string_view what) {
  if (const Json* v = member(j, key)) {
    if (!v->is_boolean()) type_error(what, key, "a boolean");
    out = v->get<bool>();
  }
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double number_or_missing(const Json& j) {
  if (j.is_null()) return kMissing;
  if (!j.is_number()) throw ConfigError("expected a number or null");
  return j.get<double>();
}

Json to_json(const env::EnvConfig& c) {
  return Json{{"window", c.window},
              {"pos_limit", c.pos_limit},
              {"cost_bps", c.cost_bps},
              {"slippage_bps", c.slippage_bps},
              {"rebalance_every", c.rebalance_every},
              {"psi", c.psi},
              {"lambda", c.lambda},
              {"reward_scale", c.reward_scale},
              {"episode_len", c.episode_len},
              {"episode_stride", c.episode_stride}};
}

env::EnvConfig env_config_from_json(const Json& j, env::EnvConfig c) {
  constexpr std::string_view w = "env";
  require_keys(j,
               {"window", "pos_limit", "cost_bps", "slippage_bps", "rebalance_every", "psi", "lambda",
                "reward_scale", "episode_len", "episode_stride"},
               w);
  read(j, "window", c.window, w);
  read(j, "pos_limit", c.pos_limit, w);
  read(j, "cost_bps", c.cost_bps, w);
  read(j, "slippage_bps", c.slippage_bps, w);
  read(j, "rebalance_every", c.rebalance_every, w);
  read(j, "psi", c.psi, w);
  read(j, "lambda", c.lambda, w);
  read(j, "reward_scale", c.reward_scale, w);
  read(j, "episode_len", c.episode_len, w);
  read(j, "episode_stride", c.episode_stride, w);
  c.validate();
  return c;
}

Json to_json(const agent::TrainConfig& c) {
  return Json{{"gamma", c.gamma},
              {"gae_lambda", c.gae_lambda},
              {"entropy_coef", c.entropy_coef},
              {"grad_clip", c.grad_clip},
              {"lr0", c.lr0},
              {"lr_min", c.lr_min},
              {"updates_total", c.updates_total},
              {"eval_every", c.eval_every},
              {"seed", c.seed},
              {"hidden", c.hidden},
              {"init_log_std", c.init_log_std},
              {"adam_beta1", c.adam_beta1},
              {"adam_beta2", c.adam_beta2},
              {"adam_eps", c.adam_eps}};
}

agent::TrainConfig train_config_from_json(const Json& j, agent::TrainConfig c) {
  constexpr std::string_view w = "train";
  require_keys(j,
               {"gamma", "gae_lambda", "entropy_coef", "grad_clip", "lr0", "lr_min", "updates_total", "eval_every",
                "seed", "hidden", "init_log_std", "adam_beta1", "adam_beta2", "adam_eps"},
               w);
  read(j, "gamma", c.gamma, w);
  read(j, "gae_lambda", c.gae_lambda, w);
  read(j, "entropy_coef", c.entropy_coef, w);
  read(j, "grad_clip", c.grad_clip, w);
  read(j, "lr0", c.lr0, w);
  read(j, "lr_min", c.lr_min, w);
  read(j, "updates_total", c.updates_total, w);
  read(j, "eval_every", c.eval_every, w);
  read(j, "seed", c.seed, w);
  read(j, "hidden", c.hidden, w);
  read(j, "init_log_std", c.init_log_std, w);
  read(j, "adam_beta1", c.adam_beta1, w);
  read(j, "adam_beta2", c.adam_beta2, w);
  read(j, "adam_eps", c.adam_eps, w);
  c.validate();
  return c;
}

Json to_json(const data::SynthConfig& c) {
  return Json{{"n_days", c.n_days},
              {"seed", c.seed},
              {"start", c.start.to_string()},
              {"transition", c.transition},
              {"drift", c.drift},
              {"vol", c.vol},
              {"signal_strength", c.signal_strength},
              {"signal_persistence", c.signal_persistence},
              {"rate_mean", c.rate_mean},
              {"rate_reversion", c.rate_reversion},
              {"rate_vol", c.rate_vol},
              {"iv_missing_rate", c.iv_missing_rate}};
}

data::SynthConfig synth_config_from_json(const Json& j, data::SynthConfig c) {
  constexpr std::string_view w = "synth";
  require_keys(j,
               {"n_days", "seed", "start", "transition", "drift", "vol", "signal_strength", "signal_persistence",
                "rate_mean", "rate_reversion", "rate_vol", "iv_missing_rate"},
               w);
  read(j, "n_days", c.n_days, w);
  read(j, "seed", c.seed, w);
  if (j.contains("start")) {
    std::string s;
    read(j, "start", s, w);
    c.start = Date::parse(s);
  }
  try {
    if (j.contains("transition")) c.transition = j.at("transition").get<std::array<std::array<double, 2>, 2>>();
    if (j.contains("drift")) c.drift = j.at("drift").get<std::array<double, 2>>();
    if (j.contains("vol")) c.vol = j.at("vol").get<std::array<double, 2>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("synth: transition/drift/vol must be 2-element numeric arrays (") + e.what() + ")");
  }
  read(j, "signal_strength", c.signal_strength, w);
  read(j, "signal_persistence", c.signal_persistence, w);
  read(j, "rate_mean", c.rate_mean, w);
  read(j, "rate_reversion", c.rate_reversion, w);
  read(j, "rate_vol", c.rate_vol, w);
  read(j, "iv_missing_rate", c.iv_missing_rate, w);
  c.validate();
  return c;
}

Json to_json(const data::SplitSpec& s) {
  return Json{{"train_end", s.train_end.to_string()}, {"valid_end", s.valid_end.to_string()}};
}

data::SplitSpec split_spec_from_json(const Json& j, data::SplitSpec s) {
  require_keys(j, {"train_end", "valid_end"}, "split");
  std::string text;
  if (j.contains("train_end")) {
    read(j, "train_end", text, "split");
    s.train_end = Date::parse(text);
  }
  if (j.contains("valid_end")) {
    read(j, "valid_end", text, "split");
    s.valid_end = Date::parse(text);
  }
  s.validate();
  return s;
}

Json to_json(const env::BaselineParams& p) {
  return Json{{"lookback", p.lookback}, {"target_vol", p.target_vol}, {"vix_median", p.vix_median},
              {"vix_band", p.vix_band}, {"a_hi", p.a_hi},             {"a_lo", p.a_lo}};
}

env::BaselineParams baseline_params_from_json(const Json& j, env::BaselineParams p) {
  constexpr std::string_view w = "baselines";
  require_keys(j, {"lookback", "target_vol", "vix_median", "vix_band", "a_hi", "a_lo"}, w);
  read(j, "lookback", p.lookback, w);
  read(j, "target_vol", p.target_vol, w);
  read(j, "vix_median", p.vix_median, w);
  read(j, "vix_band", p.vix_band, w);
  read(j, "a_hi", p.a_hi, w);
  read(j, "a_lo", p.a_lo, w);
  if (p.lookback < 1) throw ConfigError("baselines.lookback must be >= 1");
  return p;
}

Json to_json(const data::NormStats& s) {
  Json features = Json::object();
  for (std::size_t f = 0; f < data::kNumFeatures; ++f) {
    features[std::string(data::kFeatureNames[f])] =
        Json{{"mean", s.mean[f]}, {"std", s.stddev[f]}, {"degenerate", s.degenerate[f]}};
  }
  return Json{{"clip_bound", s.clip_bound}, {"features", features}};
}

data::NormStats norm_stats_from_json(const Json& j) {
  data::NormStats s;
  try {
    s.clip_bound = j.at("clip_bound").get<double>();
    const Json& features = j.at("features");
    if (features.size() != data::kNumFeatures) {
      throw IncompatibleError("norm stats: expected " + std::to_string(data::kNumFeatures) + " features, found " +
                              std::to_string(features.size()));
    }
    for (std::size_t f = 0; f < data::kNumFeatures; ++f) {
      const std::string name(data::kFeatureNames[f]);
      if (!features.contains(name)) throw IncompatibleError("norm stats: feature '" + name + "' is absent");
      const Json& e = features.at(name);
      s.mean[f] = e.at("mean").get<double>();
      s.stddev[f] = e.at("std").get<double>();
      s.degenerate[f] = e.at("degenerate").get<bool>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("norm stats: malformed JSON (") + e.what() + ")");
  }
  return s;
}

}  // namespace dhedge::config
