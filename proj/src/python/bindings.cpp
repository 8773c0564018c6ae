#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>

#include "deephedge/agent/checkpoint.hpp"
#include "deephedge/agent/distribution.hpp"
#include "deephedge/agent/gae.hpp"
#include "deephedge/agent/trainer.hpp"
#include "deephedge/analytics/blend.hpp"
#include "deephedge/analytics/metrics.hpp"
#include "deephedge/analytics/significance.hpp"
#include "deephedge/baselines.hpp"
#include "deephedge/cli/commands.hpp"
#include "deephedge/config_json.hpp"
#include "deephedge/errors.hpp"
#include "deephedge/hedging_env.hpp"
#include "deephedge/panel_io.hpp"
#include "deephedge/synthetic.hpp"

namespace py = pybind11;
using namespace dhedge;

namespace {

config::Json parse_json(const std::string& text) {
  if (text.empty()) return config::Json::object();
  try {
    return config::Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

py::dict outcome_dict(const env::StepOutcome& o) {
  py::dict d;
  d["t"] = o.t;
  d["row"] = o.row;
  d["date"] = o.date.to_string();
  d["position"] = o.position;
  d["trade"] = o.trade;
  d["cost"] = o.cost;
  d["pnl"] = o.pnl;
  d["reward"] = o.reward;
  d["ret_fwd"] = o.ret_fwd;
  d["executed"] = o.executed;
  return d;
}

data::FeaturePanel synthetic_panel(const std::string& cfg_json) {
  return data::generate_synthetic(config::synth_config_from_json(parse_json(cfg_json)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hedging overlay core: panel, environment, actor-critic agent and analytics";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<IncompatibleError>(m, "IncompatibleError", PyExc_RuntimeError);
  py::register_exception<ProtocolError>(m, "ProtocolError", PyExc_RuntimeError);

  py::class_<data::NormStats>(m, "NormStats")
      .def_property_readonly("mean", [](const data::NormStats& s) { return std::vector<double>(s.mean.begin(), s.mean.end()); })
      .def_property_readonly("std", [](const data::NormStats& s) { return std::vector<double>(s.stddev.begin(), s.stddev.end()); })
      .def_readonly("clip_bound", &data::NormStats::clip_bound)
      .def("fingerprint", [](const data::NormStats& s) { return data::fingerprint(s); })
      .def("to_json", [](const data::NormStats& s) { return config::to_json(s).dump(); });

  py::class_<data::FeaturePanel>(m, "Panel")
      .def_static("synthetic", &synthetic_panel, py::arg("config_json") = "",
                  "Generate a synthetic panel from a JSON SynthConfig")
      .def_static("read_csv", py::overload_cast<const std::string&>(&data::read_panel_csv), py::arg("path"))
      .def_static("from_input_csv",
                  [](const std::string& path) {
                    const auto raw = data::read_input_csv(path);
                    return data::build_panel(raw);
                  },
                  py::arg("path"))
      .def("__len__", &data::FeaturePanel::size)
      .def("dates",
           [](const data::FeaturePanel& p) {
             std::vector<std::string> out;
             for (const auto& r : p.rows) out.push_back(r.date.to_string());
             return out;
           })
      .def("column",
           [](const data::FeaturePanel& p, const std::string& name) {
             static const std::vector<std::pair<std::string, double data::PanelRow::*>> extra = {
                 {"spy_close", &data::PanelRow::spy_close}, {"ret_fwd", &data::PanelRow::ret_fwd}};
             for (std::size_t f = 0; f < data::kNumFeatures; ++f) {
               if (data::kFeatureNames[f] == name) return p.column(data::kFeatureMembers[f]);
             }
             for (const auto& [n, member] : extra) {
               if (n == name) return p.column(member);
             }
             throw ValidationError("unknown panel column '" + name + "'");
           },
           py::arg("name"))
      .def("split",
           [](const data::FeaturePanel& p, const std::string& train_end, const std::string& valid_end) {
             const auto s = data::split_panel(p, data::SplitSpec{Date::parse(train_end), Date::parse(valid_end)});
             return py::make_tuple(s.train, s.valid, s.test);
           },
           py::arg("train_end") = "2017-12-31", py::arg("valid_end") = "2019-12-31")
      .def("fit_norm_stats", [](const data::FeaturePanel& p) { return data::fit_norm_stats(p); })
      .def("normalized", [](const data::FeaturePanel& p, const data::NormStats& s) { return data::apply_norm(p, s); })
      .def("to_csv", [](const data::FeaturePanel& p, const std::string& path) {
        std::ofstream out(path);
        data::write_panel_csv(out, p);
      });

  m.attr("FEATURE_NAMES") = [] {
    std::vector<std::string> out;
    for (auto n : data::kFeatureNames) out.emplace_back(n);
    return out;
  }();

  py::class_<env::HedgingEnv>(m, "HedgingEnv")
      .def(py::init([](const data::FeaturePanel& panel, const data::NormStats& stats, const std::string& cfg) {
             return env::HedgingEnv(panel, stats, config::env_config_from_json(parse_json(cfg)));
           }),
           py::arg("panel"), py::arg("stats"), py::arg("env_json") = "", py::keep_alive<1, 2>())
      .def_property_readonly("num_episodes", &env::HedgingEnv::num_episodes)
      .def_property_readonly("observation_dim", &env::HedgingEnv::observation_dim)
      .def_property_readonly("steps_per_episode", &env::HedgingEnv::steps_per_episode)
      .def_property_readonly("position", &env::HedgingEnv::position)
      .def_property_readonly("done", &env::HedgingEnv::done)
      .def("reset", [](env::HedgingEnv& e, std::size_t episode) { return e.reset(episode).values; }, py::arg("episode"))
      .def("step",
           [](env::HedgingEnv& e, double action) {
             const auto r = e.step(action);
             py::object obs = r.done ? py::object(py::none()) : py::cast(r.obs.values);
             return py::make_tuple(obs, r.outcome.reward, r.done, outcome_dict(r.outcome));
           },
           py::arg("action"));

  m.def("step_cost",
        [](const std::string& cfg, double position, double trade) {
          return env::step_cost(config::env_config_from_json(parse_json(cfg)), position, trade);
        },
        py::arg("env_json"), py::arg("position"), py::arg("trade"));

  m.def("squashed_sample",
        [](double mean, double log_std, double a_max, double noise) {
          const auto s = agent::SquashedGaussian{mean, log_std, a_max}.sample(noise);
          return py::make_tuple(s.action, s.log_prob);
        },
        py::arg("mean"), py::arg("log_std"), py::arg("a_max"), py::arg("noise"));

  m.def("compute_gae",
        [](const std::vector<double>& rewards, const std::vector<double>& values, double gamma, double lam) {
          auto r = agent::compute_gae(rewards, values, gamma, lam);
          return py::make_tuple(r.advantages, r.returns);
        },
        py::arg("rewards"), py::arg("values"), py::arg("gamma") = 0.99, py::arg("gae_lambda") = 0.95);

  m.def("sharpe",
        [](const std::vector<double>& xs) {
          const auto s = analytics::annualized_sharpe(xs);
          return py::make_tuple(s.value, s.degenerate);
        },
        py::arg("per_step_bps"));
  m.def("max_drawdown", [](const std::vector<double>& r) { return analytics::max_drawdown(r); }, py::arg("returns"));
  m.def("newey_west_se", [](const std::vector<double>& x, int lag) { return analytics::newey_west_se(x, lag); },
        py::arg("series"), py::arg("lag") = 21);
  m.def("block_bootstrap_ci",
        [](const std::vector<double>& x, int block_len, int n_resamples, std::uint64_t seed, double level) {
          analytics::BootstrapOptions o;
          o.block_len = block_len;
          o.n_resamples = n_resamples;
          o.seed = seed;
          o.level = level;
          const auto ci = analytics::block_bootstrap_ci(x, o);
          py::dict d;
          d["point"] = ci.point;
          d["nw_se"] = ci.nw_se;
          d["lo"] = ci.lo;
          d["hi"] = ci.hi;
          return d;
        },
        py::arg("series"), py::arg("block_len") = 21, py::arg("n_resamples") = 1000, py::arg("seed") = 0,
        py::arg("level") = 0.95);
  m.def("blend_stats",
        [](const std::vector<std::string>& dates, const std::vector<double>& policy, const std::vector<double>& spy,
           double w) {
          analytics::DatedSeries p, s;
          for (const auto& d : dates) p.dates.push_back(Date::parse(d));
          s.dates = p.dates;
          p.values = policy;
          s.values = spy;
          const auto r = analytics::blend(p, s, w);
          py::dict d;
          d["sharpe"] = r.sharpe;
          d["ann_vol"] = r.ann_vol;
          d["cagr"] = r.cagr;
          d["max_drawdown"] = r.max_drawdown;
          d["nav"] = r.nav;
          return d;
        },
        py::arg("dates"), py::arg("policy"), py::arg("spy"), py::arg("weight"));

  m.def("train",
        [](const data::FeaturePanel& train_split, const data::FeaturePanel& valid_split, const data::NormStats& stats,
           const std::string& env_json, const std::string& train_json, const std::string& ckpt_path) {
          data::PanelSplits splits;
          splits.train = train_split;
          splits.valid = valid_split;
          const auto ec = config::env_config_from_json(parse_json(env_json));
          const auto tc = config::train_config_from_json(parse_json(train_json));
          agent::TrainResult r;
          {
            py::gil_scoped_release release;
            r = agent::train(splits, stats, ec, tc);
          }
          if (!ckpt_path.empty()) agent::save_checkpoint(ckpt_path, r.best);
          py::list log;
          for (const auto& row : r.log) {
            py::dict d;
            d["update"] = row.update;
            d["actor_loss"] = row.actor_loss;
            d["critic_loss"] = row.critic_loss;
            d["train_sharpe"] = row.train_sharpe;
            d["valid_sharpe"] = row.valid_sharpe;
            d["status"] = row.status;
            log.append(d);
          }
          py::dict out;
          out["best_update"] = r.best.update;
          out["best_valid_sharpe"] = r.best.valid_sharpe;
          out["log"] = log;
          return out;
        },
        py::arg("train"), py::arg("valid"), py::arg("stats"), py::arg("env_json") = "", py::arg("train_json") = "",
        py::arg("ckpt_path") = "");

  m.def("evaluate_checkpoint",
        [](const std::string& ckpt_path, const data::FeaturePanel& split, const data::NormStats& stats,
           const std::string& env_json) {
          const auto ck = agent::load_checkpoint(ckpt_path);
          const auto ec = env_json.empty() ? ck.env : config::env_config_from_json(parse_json(env_json));
          agent::check_compatible(ck, stats, ec);
          env::HedgingEnv e(split, stats, ec.contiguous(split.size()));
          const auto traces = env::rollout(agent::AgentPolicy(ck.params), e, true);
          const auto rep = analytics::evaluate_traces(traces, "agent", "");
          py::dict d;
          d["sharpe"] = rep.sharpe;
          d["mean_bps"] = rep.mean_bps;
          d["std_bps"] = rep.std_bps;
          d["steps"] = rep.steps;
          d["turnover"] = rep.turnover;
          d["max_drawdown"] = rep.max_drawdown;
          return d;
        },
        py::arg("ckpt_path"), py::arg("split"), py::arg("stats"), py::arg("env_json") = "");
}
