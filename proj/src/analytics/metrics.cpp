#include "deephedge/analytics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "deephedge/errors.hpp"

namespace dhedge::analytics {

SharpeEstimate annualized_sharpe(std::span<const double> per_step) {
  if (per_step.size() < 2) throw ValidationError("sharpe: need at least 2 observations");
  const double sd = sample_stddev(per_step);
  if (!(sd > 0.0)) return {0.0, true};
  return {mean(per_step) / sd * std::sqrt(kTradingDaysPerYear), false};
}

double max_drawdown(std::span<const double> returns) {
  double nav = 1.0;
  double peak = 1.0;
  double worst = 0.0;
  for (double r : returns) {
    nav *= 1.0 + r;
    if (nav <= 0.0) return -1.0;
    peak = std::max(peak, nav);
    worst = std::min(worst, nav / peak - 1.0);
  }
  return worst;
}

double max_drawdown_bps(std::span<const double> rewards_bps) {
  std::vector<double> r(rewards_bps.size());
  std::transform(rewards_bps.begin(), rewards_bps.end(), r.begin(), [](double b) { return b * 1e-4; });
  return max_drawdown(r);
}

TurnoverHitRate turnover_and_hit_rate(const std::vector<env::EpisodeTrace>& traces) {
  TurnoverHitRate out;
  std::size_t hits = 0;
  std::size_t eligible = 0;
  for (const auto& tr : traces) {
    for (const auto& s : tr.steps) {
      out.turnover += std::abs(s.trade);
      if (s.position != 0.0 && s.ret_fwd != 0.0) {
        ++eligible;
        if (s.position * s.ret_fwd > 0.0) ++hits;
      }
    }
  }
  if (eligible > 0) out.hit_rate = static_cast<double>(hits) / static_cast<double>(eligible);
  return out;
}

std::optional<double> cost_normalized_profit(const std::vector<env::EpisodeTrace>& traces) {
  double pnl = 0.0;
  double cost = 0.0;
  for (const auto& tr : traces) {
    for (const auto& s : tr.steps) {
      pnl += s.pnl;
      cost += s.cost;
    }
  }
  if (!(cost > 0.0)) return std::nullopt;
  return pnl / cost;
}

EvalReport evaluate_traces(const std::vector<env::EpisodeTrace>& traces, std::string policy, std::string split) {
  const auto rewards = env::rewards_of(traces);
  if (rewards.empty()) throw ValidationError("evaluate: no steps in the " + split + " split");
  EvalReport r;
  r.split = std::move(split);
  r.policy = std::move(policy);
  r.steps = rewards.size();
  if (rewards.size() >= 2) {
    const auto s = annualized_sharpe(rewards);
    r.sharpe = s.value;
    r.sharpe_degenerate = s.degenerate;
  } else {
    r.sharpe_degenerate = true;
  }
  r.mean_bps = mean(rewards);
  r.std_bps = sample_stddev(rewards);
  r.max_drawdown = max_drawdown_bps(rewards);
  const auto th = turnover_and_hit_rate(traces);
  r.turnover = th.turnover;
  r.hit_rate = th.hit_rate;
  r.cost_normalized_profit = cost_normalized_profit(traces);
  return r;
}

std::string eval_report_csv_header() {
  return "split,policy,sharpe,mean_bps,std_bps,steps,max_drawdown,turnover,hit_rate,cost_normalized_profit,"
         "sharpe_degenerate";
}

void write_eval_report_row(std::ostream& out, const EvalReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; };
  out << r.split << ',' << r.policy << ',' << format_double(r.sharpe) << ',' << format_double(r.mean_bps) << ','
      << format_double(r.std_bps) << ',' << r.steps << ',' << format_double(r.max_drawdown) << ','
      << format_double(r.turnover) << ',' << opt(r.hit_rate) << ',' << opt(r.cost_normalized_profit) << ','
      << (r.sharpe_degenerate ? 1 : 0) << '\n';
}

void write_trace_csv(std::ostream& out, const env::EpisodeTrace& trace) {
  out << "t,date,action,trade,cost,pnl,reward_bps,executed\n";
  for (const auto& s : trace.steps) {
    out << s.t << ',' << s.date.to_string() << ',' << format_double(s.position) << ',' << format_double(s.trade)
        << ',' << format_double(s.cost) << ',' << format_double(s.pnl) << ',' << format_double(s.reward) << ','
        << (s.executed ? 1 : 0) << '\n';
  }
}

}  // namespace dhedge::analytics
