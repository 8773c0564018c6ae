#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "deephedge/market_data.hpp"

namespace dhedge::data {

// Input schema: date,iv_30d,iv_91d,iv_25d_put,iv_25d_call,vix,y10,spy_close.
// Columns may appear in any order; unknown columns are ignored.
std::vector<RawDay> read_input_csv(std::istream& in, std::string_view source = "<input>");
std::vector<RawDay> read_input_csv(const std::string& path);
void write_input_csv(std::ostream& out, std::span<const RawDay> days);

// Panel schema: input columns followed by ts_slope,skew,rv_21d,hvol_30d,hvol_91d,ret_fwd.
std::string panel_csv_header();
void write_panel_csv(std::ostream& out, const FeaturePanel& panel);
FeaturePanel read_panel_csv(std::istream& in, std::string_view source = "<panel>");
FeaturePanel read_panel_csv(const std::string& path);

}  // namespace dhedge::data
