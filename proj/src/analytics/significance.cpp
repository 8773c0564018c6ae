#include "deephedge/analytics/significance.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "deephedge/analytics/metrics.hpp"
#include "deephedge/errors.hpp"
#include "deephedge/numeric.hpp"

namespace dhedge::analytics {

namespace {

double autocovariance(std::span<const double> x, double m, std::size_t lag) {
  double acc = 0.0;
  for (std::size_t t = lag; t < x.size(); ++t) acc += (x[t] - m) * (x[t - lag] - m);
  return acc / static_cast<double>(x.size());
}

}  // namespace

double naive_se(std::span<const double> series) {
  if (series.empty()) throw ValidationError("naive_se: empty series");
  const double g0 = autocovariance(series, mean(series), 0);
  return std::sqrt(g0 / static_cast<double>(series.size()));
}

double newey_west_se(std::span<const double> series, int lag) {
  if (lag < 0) throw ValidationError("newey_west_se: negative lag");
  if (series.size() <= static_cast<std::size_t>(lag)) {
    throw ValidationError("newey_west_se: series length " + std::to_string(series.size()) +
                          " must exceed the lag " + std::to_string(lag));
  }
  const double m = mean(series);
  double var = autocovariance(series, m, 0);
  for (int l = 1; l <= lag; ++l) {
    const double w = 1.0 - static_cast<double>(l) / static_cast<double>(lag + 1);
    var += 2.0 * w * autocovariance(series, m, static_cast<std::size_t>(l));
  }
  // Bartlett weights keep var >= 0 in exact arithmetic; guard the rounding.
  return std::sqrt(std::max(var, 0.0) / static_cast<double>(series.size()));
}

std::vector<double> circular_block_resample(std::span<const double> series, int block_len, std::uint64_t seed,
                                            std::uint64_t index) {
  const std::size_t n = series.size();
  const auto b = static_cast<std::size_t>(block_len);
  Rng rng = make_rng(seed, index);
  std::uniform_int_distribution<std::size_t> start(0, n - 1);
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    const std::size_t s = start(rng);
    for (std::size_t k = 0; k < b && out.size() < n; ++k) out.push_back(series[(s + k) % n]);
  }
  return out;
}

SharpeCI block_bootstrap_ci(std::span<const double> series, const BootstrapOptions& opts) {
  if (opts.block_len < 1) throw ValidationError("bootstrap: block_len must be >= 1");
  if (opts.n_resamples < 1) throw ValidationError("bootstrap: n_resamples must be >= 1");
  if (!(opts.level > 0.0 && opts.level < 1.0)) throw ValidationError("bootstrap: level must lie in (0, 1)");
  if (series.size() <= 2 * static_cast<std::size_t>(opts.block_len)) {
    throw ValidationError("bootstrap: series length " + std::to_string(series.size()) + " must exceed 2 * block_len");
  }
  SharpeCI ci;
  ci.block_len = opts.block_len;
  ci.n_resamples = opts.n_resamples;
  ci.seed = opts.seed;
  ci.level = opts.level;
  ci.point = annualized_sharpe(series).value;
  const double sd = sample_stddev(series);
  ci.nw_se = sd > 0.0 ? newey_west_se(series, opts.nw_lag) / sd * std::sqrt(kTradingDaysPerYear) : 0.0;

  std::vector<double> stats(static_cast<std::size_t>(opts.n_resamples));
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const auto resample = circular_block_resample(series, opts.block_len, opts.seed, i);
    stats[i] = annualized_sharpe(resample).value;
  }
  std::sort(stats.begin(), stats.end());
  const double alpha = 1.0 - opts.level;
  ci.lo = sorted_quantile(stats, 0.5 * alpha);
  ci.hi = sorted_quantile(stats, 1.0 - 0.5 * alpha);
  return ci;
}

std::string to_json(const SharpeCI& ci) {
  nlohmann::ordered_json j;
  j["point"] = ci.point;
  j["nw_se"] = ci.nw_se;
  j["lo"] = ci.lo;
  j["hi"] = ci.hi;
  j["block_len"] = ci.block_len;
  j["n_resamples"] = ci.n_resamples;
  j["seed"] = ci.seed;
  return j.dump(2) + "\n";
}

}  // namespace dhedge::analytics
