#pragma once

// JSON <-> config structs. Readers start from the defaults, override the keys
// present, and reject unknown keys and wrong types with ConfigError.

#include "json.hpp"

#include "deephedge/agent/trainer.hpp"
#include "deephedge/baselines.hpp"
#include "deephedge/hedging_env.hpp"
#include "deephedge/market_data.hpp"
#include "deephedge/synthetic.hpp"

namespace dhedge::config {

using Json = nlohmann::ordered_json;

Json to_json(const env::EnvConfig& c);
env::EnvConfig env_config_from_json(const Json& j, env::EnvConfig base = {});

Json to_json(const agent::TrainConfig& c);
agent::TrainConfig train_config_from_json(const Json& j, agent::TrainConfig base = {});

Json to_json(const data::SynthConfig& c);
data::SynthConfig synth_config_from_json(const Json& j, data::SynthConfig base = {});

Json to_json(const data::SplitSpec& s);
data::SplitSpec split_spec_from_json(const Json& j, data::SplitSpec base = data::SplitSpec::standard());

Json to_json(const env::BaselineParams& p);
env::BaselineParams baseline_params_from_json(const Json& j, env::BaselineParams base = {});

Json to_json(const data::NormStats& s);
data::NormStats norm_stats_from_json(const Json& j);

// Throws ConfigError naming `what` when j is not an object or has keys outside `allowed`.
void require_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view what);

// Reads a number, integer, string or bool member when present.
void read(const Json& j, std::string_view key, double& out, std::string_view what);
void read(const Json& j, std::string_view key, int& out, std::string_view what);
void read(const Json& j, std::string_view key, std::uint64_t& out, std::string_view what);
void read(const Json& j, std::string_view key, std::string& out, std::string_view what);
void read(const Json& j, std::string_view key, bool& out, std::string_view what);

// JSON has no NaN; missing doubles are written as null.
Json number_or_null(double x);
double number_or_missing(const Json& j);

}  // namespace dhedge::config
