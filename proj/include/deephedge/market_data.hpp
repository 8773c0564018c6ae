#pragma once

// Daily feature panel: construction, splits, and train-only normalization.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "deephedge/date.hpp"
#include "deephedge/numeric.hpp"

namespace dhedge::data {

struct QuoteRecord {
  Date date;
  int tenor_days = 0;
  double delta = 0.0;
  double iv_mid = 0.0;
  double spread = 0.0;
  bool is_put = false;
};

struct QuoteTarget {
  int tenor_days = 30;
  double delta = 0.5;
  double tenor_tol = 7.0;
  double delta_tol = 0.05;
};

// Closest delta wins; ties go to the tighter spread, then the closer tenor,
// then the earlier quote. std::nullopt when nothing is inside both tolerances.
std::optional<QuoteRecord> select_quote(std::span<const QuoteRecord> quotes, const QuoteTarget& target);

// A missing value takes the most recent present value when it is at most
// max_stale_days calendar days old. `filled`, when given, marks replaced entries.
std::vector<double> forward_fill_guarded(std::span<const Date> dates, std::span<const double> values,
                                         int max_stale_days, std::vector<bool>* filled = nullptr);

// ret[t] = P[t+1]/P[t] - 1; last entry missing.
std::vector<double> compute_forward_return(std::span<const double> prices);

// Trailing sample std of `window` returns, annualized by sqrt(252). Entries
// are missing until a full window of present returns is available.
std::vector<double> realized_vol(std::span<const double> returns, int window);

// One day of the input CSV. Derived columns are never read from input.
struct RawDay {
  Date date;
  double iv_30d = kMissing;
  double iv_91d = kMissing;
  double iv_25d_put = kMissing;
  double iv_25d_call = kMissing;
  double vix = kMissing;
  double y10 = kMissing;
  double spy_close = kMissing;
};

// Bits of PanelRow::filled.
enum FillFlag : std::uint8_t {
  kFilledIv30 = 1U << 0,
  kFilledIv91 = 1U << 1,
  kFilledIvPut = 1U << 2,
  kFilledIvCall = 1U << 3,
};

struct PanelRow {
  Date date;
  double iv_30d = kMissing;
  double iv_91d = kMissing;
  double ts_slope = kMissing;
  double iv_25d_put = kMissing;
  double iv_25d_call = kMissing;
  double skew = kMissing;
  double vix = kMissing;
  double y10 = kMissing;
  double rv_21d = kMissing;
  double hvol_30d = kMissing;
  double hvol_91d = kMissing;
  double spy_close = kMissing;
  double ret_fwd = kMissing;
  std::uint8_t filled = 0;
};

// Model inputs, in observation order. spy_close and ret_fwd are not features.
inline constexpr std::size_t kNumFeatures = 11;
inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "iv_30d", "iv_91d", "ts_slope", "iv_25d_put", "iv_25d_call", "skew",
    "vix",    "y10",    "rv_21d",   "hvol_30d",   "hvol_91d"};
inline constexpr std::array<double PanelRow::*, kNumFeatures> kFeatureMembers = {
    &PanelRow::iv_30d,      &PanelRow::iv_91d, &PanelRow::ts_slope, &PanelRow::iv_25d_put,
    &PanelRow::iv_25d_call, &PanelRow::skew,   &PanelRow::vix,      &PanelRow::y10,
    &PanelRow::rv_21d,      &PanelRow::hvol_30d, &PanelRow::hvol_91d};

struct FeaturePanel {
  std::vector<PanelRow> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  const PanelRow& operator[](std::size_t i) const { return rows[i]; }
  std::vector<Date> dates() const;
  std::vector<double> column(double PanelRow::*member) const;
};

struct PanelBuildSpec {
  int max_stale_days = 3;
  std::size_t min_rows = 300;
};

FeaturePanel build_panel(std::span<const RawDay> raw, const PanelBuildSpec& spec = {});

struct DailyQuotes {
  Date date;
  std::vector<QuoteRecord> quotes;
  double vix = kMissing;
  double y10 = kMissing;
  double spy_close = kMissing;
};

// ATM IVs at the short/long tenor use call delta `atm_delta`; the 25-delta
// wings use put delta -wing_delta and call delta +wing_delta at the short tenor.
struct QuoteSelectionSpec {
  int short_tenor = 30;
  int long_tenor = 91;
  double atm_delta = 0.5;
  double wing_delta = 0.25;
  double tenor_tol = 7.0;
  double delta_tol = 0.05;
  double max_spread = 1e9;
};

std::vector<RawDay> select_features(std::span<const DailyQuotes> chains, const QuoteSelectionSpec& spec);

struct SplitSpec {
  Date train_end;
  Date valid_end;

  void validate() const;
  static SplitSpec standard();  // train <= 2017-12-31, valid 2018-2019, test 2020+
};

enum class SplitName { kTrain, kValid, kTest };
std::string_view to_string(SplitName s);
SplitName parse_split_name(std::string_view s);
SplitName classify(Date d, const SplitSpec& spec);

struct PanelSplits {
  FeaturePanel train;
  FeaturePanel valid;
  FeaturePanel test;

  const FeaturePanel& get(SplitName s) const;
};

PanelSplits split_panel(const FeaturePanel& panel, const SplitSpec& spec);

struct NormStats {
  std::array<double, kNumFeatures> mean{};
  std::array<double, kNumFeatures> stddev{};
  std::array<bool, kNumFeatures> degenerate{};
  double clip_bound = 5.0;

  bool operator==(const NormStats&) const = default;
};

NormStats fit_norm_stats(const FeaturePanel& train, double clip_bound = 5.0);

// Content hash of the feature schema and the normalization statistics.
std::string fingerprint(const NormStats& stats);

// rows x kNumFeatures, z-scored and clipped; missing/non-finite entries are 0.
Eigen::MatrixXd apply_norm(const FeaturePanel& panel, const NormStats& stats);

}  // namespace dhedge::data
