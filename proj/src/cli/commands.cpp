#include "deephedge/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "deephedge/agent/checkpoint.hpp"
#include "deephedge/analytics/blend.hpp"
#include "deephedge/analytics/metrics.hpp"
#include "deephedge/analytics/significance.hpp"
#include "deephedge/errors.hpp"
#include "deephedge/fs_util.hpp"
#include "deephedge/panel_io.hpp"

namespace dhedge::cli {

namespace fs = std::filesystem;
using config::Json;

namespace {

constexpr std::string_view kVersion = "0.1.0";

std::string resolve(const std::string& p, const fs::path& base) {
  if (p.empty() || base.empty() || fs::path(p).is_absolute()) return p;
  return (base / p).lexically_normal().string();
}

Json period_to_json(const analytics::NamedPeriod& p) {
  return Json{{"name", p.name}, {"start", p.start.to_string()}, {"end", p.end.to_string()}};
}

template <typename T>
std::vector<T> read_array(const Json& j, std::string_view key, std::vector<T> fallback, std::string_view what) {
  if (!j.contains(key)) return fallback;
  const Json& a = j.at(std::string(key));
  if (!a.is_array() || a.empty()) {
    throw ConfigError(std::string(what) + "." + std::string(key) + ": expected a non-empty array");
  }
  std::vector<T> out;
  for (const auto& v : a) {
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(std::string(what) + "." + std::string(key) + ": expected integers");
    } else {
      if (!v.is_number()) throw ConfigError(std::string(what) + "." + std::string(key) + ": expected numbers");
    }
    out.push_back(v.get<T>());
  }
  return out;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string panel_text(const data::FeaturePanel& panel) {
  std::ostringstream os;
  data::write_panel_csv(os, panel);
  return os.str();
}

std::string hash_text(std::string_view bytes) { return hex64(fnv1a64(bytes)); }

Json options_json(const Options& opt) {
  Json o{{"split", opt.split}, {"deterministic", opt.deterministic}};
  o["ckpt"] = opt.ckpt ? Json(opt.ckpt->string()) : Json(nullptr);
  o["resume"] = opt.resume ? Json(opt.resume->string()) : Json(nullptr);
  o["seed"] = opt.seed ? Json(*opt.seed) : Json(nullptr);
  return o;
}

void write_resolved(const Options& opt, std::string_view command, const RunConfig& cfg, const Json& inputs) {
  Json j{{"tool", "dhedge"},
         {"version", kVersion},
         {"command", command},
         {"options", options_json(opt)},
         {"inputs", inputs},
         {"config", to_json(cfg)}};
  write_file_atomic(opt.out / "resolved_config.json", dump(j));
}

struct Workspace {
  data::FeaturePanel panel;
  data::PanelSplits splits;
  data::NormStats stats;
  std::string panel_hash;
  std::string feature_fingerprint;
};

Workspace load_workspace(const RunConfig& cfg) {
  if (cfg.panel.empty()) throw ConfigError("config: 'panel' path is required");
  if (cfg.norm_stats.empty()) throw ConfigError("config: 'norm_stats' path is required");
  Workspace ws;
  const std::string bytes = read_file(cfg.panel);
  ws.panel_hash = hash_text(bytes);
  std::istringstream in(bytes);
  ws.panel = data::read_panel_csv(in, cfg.panel);

  Json meta;
  try {
    meta = Json::parse(read_file(cfg.norm_stats));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("norm stats " + cfg.norm_stats + ": invalid JSON (" + e.what() + ")");
  }
  if (!meta.is_object() || !meta.contains("stats") || !meta.contains("panel_hash") || !meta.contains("split")) {
    throw ValidationError("norm stats " + cfg.norm_stats + ": expected keys stats, panel_hash, split");
  }
  ws.stats = config::norm_stats_from_json(meta.at("stats"));
  ws.feature_fingerprint = data::fingerprint(ws.stats);
  if (meta.at("panel_hash") != ws.panel_hash) {
    throw IncompatibleError("panel " + cfg.panel + " (hash " + ws.panel_hash +
                            ") is not the panel these normalization statistics were fitted on (hash " +
                            meta.at("panel_hash").get<std::string>() + ")");
  }
  const data::SplitSpec fitted = config::split_spec_from_json(meta.at("split"));
  if (!(fitted.train_end == cfg.split.train_end) || !(fitted.valid_end == cfg.split.valid_end)) {
    throw IncompatibleError("normalization statistics were fitted with split " + config::to_json(fitted).dump() +
                            " but the config requests " + config::to_json(cfg.split).dump());
  }
  if (meta.contains("feature_fingerprint") && meta.at("feature_fingerprint") != ws.feature_fingerprint) {
    throw IncompatibleError("norm stats " + cfg.norm_stats + ": recorded feature fingerprint does not match its content");
  }
  ws.splits = data::split_panel(ws.panel, cfg.split);
  return ws;
}

std::vector<data::SplitName> requested_splits(const std::string& s) {
  if (s == "all") return {data::SplitName::kTrain, data::SplitName::kValid, data::SplitName::kTest};
  return {data::parse_split_name(s)};
}

// Whole-split replay, so every date of the split appears once.
env::EpisodeTrace replay(const env::Policy& policy, const data::FeaturePanel& split, const data::NormStats& stats,
                         const env::EnvConfig& cfg, bool deterministic, std::uint64_t seed) {
  env::HedgingEnv env(split, stats, cfg.contiguous(split.size()));
  auto traces = env::rollout(policy, env, deterministic, seed);
  return std::move(traces.front());
}

struct AgentContext {
  agent::Checkpoint ckpt;
  std::string ckpt_hash;
};

AgentContext load_agent(const Options& opt, const Workspace& ws) {
  if (!opt.ckpt) throw ConfigError("--ckpt is required");
  AgentContext a;
  a.ckpt_hash = hash_text(read_file(*opt.ckpt));
  a.ckpt = agent::load_checkpoint(*opt.ckpt);
  agent::check_compatible(a.ckpt, ws.stats, opt.config.env);
  return a;
}

env::BaselineParams fitted_baselines(const RunConfig& cfg, const Workspace& ws) {
  env::BaselineParams p = cfg.baselines;
  p.fit(ws.splits.train);
  return p;
}

void write_text(const fs::path& path, const std::string& text) { write_file_atomic(path, text); }

}  // namespace

Json to_json(const RunConfig& c) {
  Json periods = Json::array();
  for (const auto& p : c.stats.periods) periods.push_back(period_to_json(p));
  Json j{{"panel", c.panel}, {"norm_stats", c.norm_stats}, {"input_csv", c.input_csv}};
  if (c.synth) j["synth"] = config::to_json(*c.synth);
  j["split"] = config::to_json(c.split);
  j["env"] = config::to_json(c.env);
  j["train"] = config::to_json(c.train);
  j["seeds"] = c.seeds;
  j["sweep"] = Json{{"cadences", c.sweep.cadences},
                    {"slippages", c.sweep.slippages},
                    {"pos_limit", c.sweep.pos_limit},
                    {"jobs", c.sweep.jobs}};
  j["blend"] = Json{{"weights", c.blend.weights},
                    {"attribution_weight", c.blend.attribution_weight},
                    {"rolling_window", c.blend.rolling_window}};
  j["stats"] = Json{{"block_len", c.stats.block_len}, {"n_resamples", c.stats.n_resamples},
                    {"nw_lag", c.stats.nw_lag},       {"level", c.stats.level},
                    {"benchmark", c.stats.benchmark}, {"periods", periods}};
  j["baselines"] = config::to_json(c.baselines);
  return j;
}

RunConfig run_config_from_json(const Json& j, const fs::path& base_dir) {
  config::require_keys(j,
                       {"panel", "norm_stats", "input_csv", "synth", "split", "env", "train", "seeds", "sweep",
                        "blend", "stats", "baselines"},
                       "config");
  RunConfig c;
  config::read(j, "panel", c.panel, "config");
  config::read(j, "norm_stats", c.norm_stats, "config");
  config::read(j, "input_csv", c.input_csv, "config");
  c.panel = resolve(c.panel, base_dir);
  c.norm_stats = resolve(c.norm_stats, base_dir);
  c.input_csv = resolve(c.input_csv, base_dir);
  if (j.contains("synth") && !j.at("synth").is_null()) c.synth = config::synth_config_from_json(j.at("synth"));
  if (j.contains("split")) c.split = config::split_spec_from_json(j.at("split"));
  if (j.contains("env")) c.env = config::env_config_from_json(j.at("env"));
  if (j.contains("train")) c.train = config::train_config_from_json(j.at("train"));
  c.seeds = read_array<std::uint64_t>(j, "seeds", c.seeds, "config");
  if (j.contains("sweep")) {
    const Json& s = j.at("sweep");
    config::require_keys(s, {"cadences", "slippages", "pos_limit", "jobs"}, "sweep");
    c.sweep.cadences = read_array<int>(s, "cadences", c.sweep.cadences, "sweep");
    c.sweep.slippages = read_array<double>(s, "slippages", c.sweep.slippages, "sweep");
    config::read(s, "pos_limit", c.sweep.pos_limit, "sweep");
    config::read(s, "jobs", c.sweep.jobs, "sweep");
    if (c.sweep.jobs < 1) throw ConfigError("sweep.jobs must be >= 1");
    if (!(c.sweep.pos_limit > 0.0)) throw ConfigError("sweep.pos_limit must be positive");
  }
  if (j.contains("blend")) {
    const Json& b = j.at("blend");
    config::require_keys(b, {"weights", "attribution_weight", "rolling_window"}, "blend");
    c.blend.weights = read_array<double>(b, "weights", c.blend.weights, "blend");
    config::read(b, "attribution_weight", c.blend.attribution_weight, "blend");
    config::read(b, "rolling_window", c.blend.rolling_window, "blend");
    if (!(c.blend.attribution_weight >= 0.0 && c.blend.attribution_weight <= 1.0)) {
      throw ConfigError("blend.attribution_weight must be in [0, 1]");
    }
    if (c.blend.rolling_window < 2) throw ConfigError("blend.rolling_window must be >= 2");
  }
  if (j.contains("stats")) {
    const Json& s = j.at("stats");
    config::require_keys(s, {"block_len", "n_resamples", "nw_lag", "level", "benchmark", "periods"}, "stats");
    config::read(s, "block_len", c.stats.block_len, "stats");
    config::read(s, "n_resamples", c.stats.n_resamples, "stats");
    config::read(s, "nw_lag", c.stats.nw_lag, "stats");
    config::read(s, "level", c.stats.level, "stats");
    config::read(s, "benchmark", c.stats.benchmark, "stats");
    if (s.contains("periods")) {
      c.stats.periods.clear();
      for (const auto& p : s.at("periods")) {
        config::require_keys(p, {"name", "start", "end"}, "stats.periods");
        analytics::NamedPeriod np;
        std::string a, b;
        config::read(p, "name", np.name, "stats.periods");
        config::read(p, "start", a, "stats.periods");
        config::read(p, "end", b, "stats.periods");
        np.start = Date::parse(a);
        np.end = Date::parse(b);
        c.stats.periods.push_back(np);
      }
    }
    if (c.stats.block_len < 1 || c.stats.n_resamples < 1 || c.stats.nw_lag < 0) {
      throw ConfigError("stats: block_len and n_resamples must be >= 1, nw_lag >= 0");
    }
    if (!(c.stats.level > 0.0 && c.stats.level < 1.0)) throw ConfigError("stats.level must be in (0, 1)");
  }
  if (j.contains("baselines")) c.baselines = config::baseline_params_from_json(j.at("baselines"));
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": invalid JSON (" + e.what() + ")");
  }
  return run_config_from_json(j, path.parent_path());
}

void cmd_synth(const Options& opt) {
  RunConfig cfg = opt.config;
  data::SynthConfig sc = cfg.synth.value_or(data::SynthConfig{});
  if (opt.seed) sc.seed = *opt.seed;
  cfg.synth = sc;
  const data::SyntheticMarket m = data::generate_synthetic_market(sc);
  std::ostringstream input;
  data::write_input_csv(input, m.days);
  std::ostringstream truth;
  truth << "date,regime,signal\n";
  for (std::size_t i = 0; i < m.days.size(); ++i) {
    truth << m.days[i].date.to_string() << ',' << m.regime[i] << ',' << format_double(m.signal[i]) << '\n';
  }
  write_text(opt.out / "input.csv", input.str());
  write_text(opt.out / "synth_truth.csv", truth.str());
  write_resolved(opt, "synth", cfg, Json{{"input_csv_hash", hash_text(input.str())}});
}

void cmd_build_panel(const Options& opt) {
  RunConfig cfg = opt.config;
  std::vector<data::RawDay> raw;
  Json inputs = Json::object();
  if (!cfg.input_csv.empty()) {
    const std::string bytes = read_file(cfg.input_csv);
    inputs["input_csv_hash"] = hash_text(bytes);
    std::istringstream in(bytes);
    raw = data::read_input_csv(in, cfg.input_csv);
  } else if (cfg.synth) {
    data::SynthConfig sc = *cfg.synth;
    if (opt.seed) sc.seed = *opt.seed;
    cfg.synth = sc;
    raw = data::generate_synthetic_market(sc).days;
  } else {
    throw ConfigError("build-panel: set either 'input_csv' or 'synth' in the config");
  }
  cfg.split.validate();
  const data::FeaturePanel panel = data::build_panel(raw);
  const data::PanelSplits splits = data::split_panel(panel, cfg.split);
  const data::NormStats stats = data::fit_norm_stats(splits.train);

  const std::string text = panel_text(panel);
  const std::string panel_hash = hash_text(text);
  const std::string fp = data::fingerprint(stats);
  Json norm{{"panel_hash", panel_hash},
            {"split", config::to_json(cfg.split)},
            {"feature_fingerprint", fp},
            {"stats", config::to_json(stats)}};
  Json manifest{{"panel_hash", panel_hash}, {"split", config::to_json(cfg.split)}, {"rows", panel.size()}};
  Json parts = Json::object();
  for (auto s : {data::SplitName::kTrain, data::SplitName::kValid, data::SplitName::kTest}) {
    const auto& p = splits.get(s);
    parts[std::string(data::to_string(s))] =
        Json{{"rows", p.size()}, {"first", p.rows.front().date.to_string()}, {"last", p.rows.back().date.to_string()}};
  }
  manifest["splits"] = parts;

  write_text(opt.out / "panel.csv", text);
  write_text(opt.out / "norm_stats.json", dump(norm));
  write_text(opt.out / "split_manifest.json", dump(manifest));
  cfg.panel = (opt.out / "panel.csv").string();
  cfg.norm_stats = (opt.out / "norm_stats.json").string();
  inputs["panel_hash"] = panel_hash;
  inputs["feature_fingerprint"] = fp;
  write_resolved(opt, "build-panel", cfg, inputs);
}

void cmd_train(const Options& opt) {
  RunConfig cfg = opt.config;
  const Workspace ws = load_workspace(cfg);
  std::optional<agent::Checkpoint> resume;
  if (opt.resume) {
    resume = agent::load_checkpoint(*opt.resume);
    cfg.seeds = {resume->train.seed};
  } else if (opt.seed) {
    cfg.seeds = {*opt.seed};
  }

  std::ostringstream summary;
  summary << "seed,best_update,best_valid_sharpe,best_train_sharpe,test_sharpe,last_update\n";
  for (std::uint64_t seed : cfg.seeds) {
    agent::TrainConfig tc = cfg.train;
    tc.seed = seed;
    const fs::path dir = opt.out / ("seed_" + std::to_string(seed));
    const agent::TrainResult r = agent::train(ws.splits, ws.stats, cfg.env, tc, resume ? &*resume : nullptr);
    std::ostringstream log;
    log << agent::train_log_header() << '\n';
    for (const auto& row : r.log) log << agent::format_train_log_row(row) << '\n';
    std::ostringstream best, last;
    agent::write_checkpoint(best, r.best);
    agent::write_checkpoint(last, r.last);
    write_text(dir / "train_log.csv", log.str());
    write_text(dir / "best.ckpt", best.str());
    write_text(dir / "last.ckpt", last.str());
    const agent::AgentPolicy policy(r.best.params);
    const double test_sharpe = agent::deterministic_sharpe(policy, ws.splits.test, ws.stats, cfg.env);
    summary << seed << ',' << r.best.update << ',' << format_double(r.best.valid_sharpe) << ','
            << format_double(r.best.train_sharpe) << ',' << format_double(test_sharpe) << ',' << r.last.update
            << '\n';
  }
  write_text(opt.out / "seeds_summary.csv", summary.str());
  Json inputs{{"panel_hash", ws.panel_hash}, {"feature_fingerprint", ws.feature_fingerprint},
              {"env_fingerprint", env::fingerprint(cfg.env)}};
  if (opt.resume) inputs["resume_hash"] = hash_text(read_file(*opt.resume));
  write_resolved(opt, "train", cfg, inputs);
}

void cmd_evaluate(const Options& opt) {
  RunConfig cfg = opt.config;
  const Workspace ws = load_workspace(cfg);
  const AgentContext a = load_agent(opt, ws);
  cfg.baselines = fitted_baselines(cfg, ws);
  const std::uint64_t seed = opt.seed.value_or(a.ckpt.train.seed);
  const agent::AgentPolicy policy(a.ckpt.params);

  std::ostringstream report;
  report << analytics::eval_report_csv_header() << '\n';
  for (auto s : requested_splits(opt.split)) {
    const std::string name(data::to_string(s));
    const auto& split = ws.splits.get(s);
    const env::EpisodeTrace trace = replay(policy, split, ws.stats, cfg.env, opt.deterministic, seed);
    analytics::write_eval_report_row(report, analytics::evaluate_traces({trace}, "agent", name));
    std::ostringstream tr;
    analytics::write_trace_csv(tr, trace);
    write_text(opt.out / ("trace_" + name + "_agent.csv"), tr.str());
    for (auto kind : env::all_baselines()) {
      const auto baseline = env::make_baseline(kind, cfg.baselines);
      const env::EpisodeTrace bt = replay(*baseline, split, ws.stats, cfg.env, true, seed);
      analytics::write_eval_report_row(report, analytics::evaluate_traces({bt}, std::string(env::to_string(kind)), name));
    }
  }
  write_text(opt.out / "eval_report.csv", report.str());
  write_resolved(opt, "evaluate", cfg,
                 Json{{"panel_hash", ws.panel_hash},
                      {"feature_fingerprint", ws.feature_fingerprint},
                      {"ckpt_hash", a.ckpt_hash},
                      {"policy_seed", seed}});
}

void cmd_sweep(const Options& opt) {
  RunConfig cfg = opt.config;
  if (opt.seed) cfg.seeds = {*opt.seed};
  const Workspace ws = load_workspace(cfg);
  const std::uint64_t seed = cfg.seeds.front();

  struct Cell {
    int cadence = 1;
    double slippage = 0.0;
    std::string row;
  };
  std::vector<Cell> cells;
  for (int c : cfg.sweep.cadences) {
    for (double s : cfg.sweep.slippages) cells.push_back(Cell{c, s, {}});
  }

  auto run_cell = [&](Cell& cell) {
    std::ostringstream row;
    row << cell.cadence << ',' << format_double(cell.slippage) << ',' << format_double(cfg.sweep.pos_limit) << ','
        << seed << ',';
    try {
      env::EnvConfig ec = cfg.env;
      ec.rebalance_every = cell.cadence;
      ec.slippage_bps = cell.slippage;
      ec.pos_limit = cfg.sweep.pos_limit;
      agent::TrainConfig tc = cfg.train;
      tc.seed = seed;
      const agent::TrainResult r = agent::train(ws.splits, ws.stats, ec, tc);
      std::ostringstream ck;
      agent::write_checkpoint(ck, r.best);
      write_text(opt.out / "cells" /
                     ("cadence_" + std::to_string(cell.cadence) + "_slippage_" + format_double(cell.slippage)) /
                     "best.ckpt",
                 ck.str());
      const agent::AgentPolicy policy(r.best.params);
      row << r.best.update << ',' << format_double(agent::deterministic_sharpe(policy, ws.splits.train, ws.stats, ec))
          << ',' << format_double(agent::deterministic_sharpe(policy, ws.splits.valid, ws.stats, ec)) << ','
          << format_double(agent::deterministic_sharpe(policy, ws.splits.test, ws.stats, ec)) << ",ok,";
    } catch (const std::exception& e) {
      row << ",,,,failed," << csv_quote(e.what());
    }
    cell.row = row.str();
  };

  const auto jobs = static_cast<std::size_t>(std::max(1, cfg.sweep.jobs));
  if (jobs == 1) {
    for (auto& cell : cells) run_cell(cell);
  } else {
    std::mutex mu;
    std::size_t next = 0;
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < std::min(jobs, cells.size()); ++w) {
      workers.emplace_back([&] {
        while (true) {
          std::size_t i;
          {
            std::lock_guard lock(mu);
            if (next >= cells.size()) return;
            i = next++;
          }
          run_cell(cells[i]);
        }
      });
    }
    for (auto& t : workers) t.join();
  }

  std::ostringstream grid;
  grid << "cadence,slippage_bps,pos_limit,seed,best_update,train_sharpe,valid_sharpe,test_sharpe,status,error\n";
  for (const auto& cell : cells) grid << cell.row << '\n';
  write_text(opt.out / "grid.csv", grid.str());
  write_resolved(opt, "sweep", cfg,
                 Json{{"panel_hash", ws.panel_hash}, {"feature_fingerprint", ws.feature_fingerprint}});
}

void cmd_blend(const Options& opt) {
  RunConfig cfg = opt.config;
  if (opt.split == "all") throw ConfigError("blend: --split must name a single split");
  const Workspace ws = load_workspace(cfg);
  const AgentContext a = load_agent(opt, ws);
  const data::SplitName s = data::parse_split_name(opt.split);
  const agent::AgentPolicy policy(a.ckpt.params);
  const std::uint64_t seed = opt.seed.value_or(a.ckpt.train.seed);
  const env::EpisodeTrace trace = replay(policy, ws.splits.get(s), ws.stats, cfg.env, opt.deterministic, seed);

  analytics::DatedSeries pol, spy;
  for (const auto& st : trace.steps) {
    pol.dates.push_back(st.date);
    pol.values.push_back(st.pnl);
    spy.dates.push_back(st.date);
    spy.values.push_back(st.ret_fwd);
  }
  std::vector<double> weights = cfg.blend.weights;
  const auto reports = analytics::blend_sweep(pol, spy, weights, cfg.blend.rolling_window);
  const auto chosen = analytics::blend(pol, spy, cfg.blend.attribution_weight, cfg.blend.rolling_window);

  std::ostringstream frontier, summary, rolling, attribution;
  analytics::write_frontier_csv(frontier, reports);
  analytics::write_blend_summary_csv(summary, reports);
  analytics::write_rolling_csv(rolling, chosen);
  analytics::write_attribution_csv(attribution, chosen);
  write_text(opt.out / "frontier.csv", frontier.str());
  write_text(opt.out / "blend_summary.csv", summary.str());
  write_text(opt.out / "rolling_differentials.csv", rolling.str());
  write_text(opt.out / "calendar_attribution.csv", attribution.str());
  write_resolved(opt, "blend", cfg,
                 Json{{"panel_hash", ws.panel_hash},
                      {"feature_fingerprint", ws.feature_fingerprint},
                      {"ckpt_hash", a.ckpt_hash}});
}

void cmd_stats(const Options& opt) {
  RunConfig cfg = opt.config;
  if (opt.split == "all") throw ConfigError("stats: --split must name a single split");
  const Workspace ws = load_workspace(cfg);
  const AgentContext a = load_agent(opt, ws);
  cfg.baselines = fitted_baselines(cfg, ws);
  const data::SplitName s = data::parse_split_name(opt.split);
  const std::string split_name(data::to_string(s));
  const auto& split = ws.splits.get(s);
  const std::uint64_t seed = opt.seed.value_or(a.ckpt.train.seed);

  const agent::AgentPolicy policy(a.ckpt.params);
  const env::EpisodeTrace agent_trace = replay(policy, split, ws.stats, cfg.env, opt.deterministic, seed);
  std::vector<analytics::NamedSeries> series;
  series.push_back({"agent", env::rewards_of({agent_trace})});
  for (auto kind : env::all_baselines()) {
    const auto b = env::make_baseline(kind, cfg.baselines);
    series.push_back({std::string(env::to_string(kind)), env::rewards_of({replay(*b, split, ws.stats, cfg.env, true, seed)})});
  }
  analytics::NamedSeries spy{"spy", {}};
  std::vector<Date> dates;
  std::vector<double> vix;
  for (const auto& st : agent_trace.steps) {
    spy.values.push_back(1e4 * st.ret_fwd);
    dates.push_back(st.date);
    vix.push_back(split[st.row].vix);
  }
  series.push_back(spy);

  const auto bench = std::find_if(series.begin(), series.end(),
                                  [&](const auto& x) { return x.name == cfg.stats.benchmark; });
  if (bench == series.end()) throw ConfigError("stats.benchmark '" + cfg.stats.benchmark + "' is not a known series");

  analytics::BootstrapOptions bo;
  bo.block_len = cfg.stats.block_len;
  bo.n_resamples = cfg.stats.n_resamples;
  bo.seed = seed;
  bo.level = cfg.stats.level;
  bo.nw_lag = cfg.stats.nw_lag;
  std::ostringstream errors;
  errors << "policy,error\n";
  for (const auto& x : series) {
    try {
      write_text(opt.out / ("ci_" + x.name + ".json"), analytics::to_json(analytics::block_bootstrap_ci(x.values, bo)) + "\n");
    } catch (const ValidationError& e) {
      errors << x.name << ',' << csv_quote(e.what()) << '\n';
    }
  }
  write_text(opt.out / "stats_errors.csv", errors.str());

  const analytics::NamedSeries benchmark = *bench;
  std::ostringstream terciles, periods;
  terciles << analytics::regime_csv_header() << '\n';
  analytics::write_regime_rows(terciles,
                               analytics::regime_attribution(series, benchmark, analytics::vix_tercile_buckets(vix)),
                               split_name);
  periods << analytics::regime_csv_header() << '\n';
  analytics::write_regime_rows(
      periods, analytics::regime_attribution(series, benchmark, analytics::period_buckets(dates, cfg.stats.periods)),
      split_name);
  write_text(opt.out / "vix_terciles.csv", terciles.str());
  write_text(opt.out / "periods.csv", periods.str());
  write_resolved(opt, "stats", cfg,
                 Json{{"panel_hash", ws.panel_hash},
                      {"feature_fingerprint", ws.feature_fingerprint},
                      {"ckpt_hash", a.ckpt_hash},
                      {"policy_seed", seed}});
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IncompatibleError*>(&e) != nullptr) return 3;
  if (dynamic_cast<const ValidationError*>(&e) != nullptr) return 2;
  return 1;
}

}  // namespace dhedge::cli
