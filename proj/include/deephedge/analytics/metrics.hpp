#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deephedge/hedging_env.hpp"

namespace dhedge::analytics {

struct SharpeEstimate {
  double value = 0.0;
  bool degenerate = false;  // zero variance; value reported as 0
};

// mean / sample-std of per-step values, times sqrt(252). Needs >= 2 values.
SharpeEstimate annualized_sharpe(std::span<const double> per_step);

// Worst NAV/peak - 1 of the multiplicatively compounded fractional returns
// (NAV starts at 1). In [-1, 0]; a NAV that reaches zero gives -1.
double max_drawdown(std::span<const double> returns);
double max_drawdown_bps(std::span<const double> rewards_bps);

struct TurnoverHitRate {
  double turnover = 0.0;
  std::optional<double> hit_rate;  // empty when no step has a != 0 and R != 0
};

TurnoverHitRate turnover_and_hit_rate(const std::vector<env::EpisodeTrace>& traces);

// sum(pnl) / sum(cost); empty when total cost is zero.
std::optional<double> cost_normalized_profit(const std::vector<env::EpisodeTrace>& traces);

struct EvalReport {
  std::string split;
  std::string policy;
  double sharpe = 0.0;
  bool sharpe_degenerate = false;
  double mean_bps = 0.0;
  double std_bps = 0.0;
  double max_drawdown = 0.0;
  double turnover = 0.0;
  std::optional<double> hit_rate;
  std::optional<double> cost_normalized_profit;
  std::size_t steps = 0;
};

EvalReport evaluate_traces(const std::vector<env::EpisodeTrace>& traces, std::string policy, std::string split);

std::string eval_report_csv_header();
void write_eval_report_row(std::ostream& out, const EvalReport& r);

// t,date,action,trade,cost,pnl,reward_bps,executed
void write_trace_csv(std::ostream& out, const env::EpisodeTrace& trace);

}  // namespace dhedge::analytics
