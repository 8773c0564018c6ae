#include "deephedge/panel_io.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "deephedge/errors.hpp"

namespace dhedge::data {

namespace {

constexpr std::array<std::string_view, 8> kInputColumns = {"date", "iv_30d", "iv_91d", "iv_25d_put",
                                                           "iv_25d_call", "vix", "y10", "spy_close"};
constexpr std::array<std::string_view, 6> kDerivedColumns = {"ts_slope", "skew",     "rv_21d",
                                                             "hvol_30d", "hvol_91d", "ret_fwd"};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  if (!cells.empty() && !cells.back().empty() && cells.back().back() == '\r') cells.back().pop_back();
  return cells;
}

// Reads a header + rows, mapping each required column name to its index.
class CsvTable {
 public:
  CsvTable(std::istream& in, std::string_view source, std::span<const std::string_view> required)
      : source_(source) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(source_ + ": empty file, missing header");
    const auto header = split_csv_line(line);
    std::map<std::string, std::size_t, std::less<>> pos;
    for (std::size_t i = 0; i < header.size(); ++i) pos[header[i]] = i;
    for (auto name : required) {
      auto it = pos.find(name);
      if (it == pos.end()) throw ValidationError(source_ + ": missing required column '" + std::string(name) + "'");
      index_[std::string(name)] = it->second;
    }
    width_ = header.size();
    std::size_t row = 1;  // file line number; the header is line 1
    while (std::getline(in, line)) {
      ++row;
      if (line.empty() || line == "\r") continue;
      auto cells = split_csv_line(line);
      if (cells.size() != width_) {
        throw ValidationError(source_ + ": line " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                              " cells, expected " + std::to_string(width_));
      }
      rows_.push_back(std::move(cells));
      row_numbers_.push_back(row);
    }
  }

  std::size_t size() const { return rows_.size(); }

  const std::string& cell(std::size_t r, std::string_view col) const {
    return rows_[r][index_.find(col)->second];
  }

  double number(std::size_t r, std::string_view col) const {
    try {
      return parse_double(cell(r, col));
    } catch (const ValidationError& e) {
      throw ValidationError(where(r, col) + ": " + e.what());
    }
  }

  Date date(std::size_t r) const {
    try {
      return Date::parse(cell(r, "date"));
    } catch (const ValidationError& e) {
      throw ValidationError(where(r, "date") + ": " + e.what());
    }
  }

  std::string where(std::size_t r, std::string_view col) const {
    return source_ + ": line " + std::to_string(row_numbers_[r]) + ", column '" + std::string(col) + "'";
  }

 private:
  std::string source_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::size_t width_ = 0;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> row_numbers_;
};

RawDay read_raw(const CsvTable& t, std::size_t r) {
  RawDay d;
  d.date = t.date(r);
  d.iv_30d = t.number(r, "iv_30d");
  d.iv_91d = t.number(r, "iv_91d");
  d.iv_25d_put = t.number(r, "iv_25d_put");
  d.iv_25d_call = t.number(r, "iv_25d_call");
  d.vix = t.number(r, "vix");
  d.y10 = t.number(r, "y10");
  d.spy_close = t.number(r, "spy_close");
  if (!(d.spy_close > 0.0)) throw ValidationError(t.where(r, "spy_close") + ": price must be present and positive");
  return d;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::vector<RawDay> read_input_csv(std::istream& in, std::string_view source) {
  const CsvTable t(in, source, kInputColumns);
  std::vector<RawDay> out;
  out.reserve(t.size());
  for (std::size_t r = 0; r < t.size(); ++r) out.push_back(read_raw(t, r));
  return out;
}

std::vector<RawDay> read_input_csv(const std::string& path) {
  auto in = open_or_throw(path);
  return read_input_csv(in, path);
}

void write_input_csv(std::ostream& out, std::span<const RawDay> days) {
  for (std::size_t i = 0; i < kInputColumns.size(); ++i) out << (i ? "," : "") << kInputColumns[i];
  out << '\n';
  for (const auto& d : days) {
    out << d.date.to_string() << ',' << format_double(d.iv_30d) << ',' << format_double(d.iv_91d) << ','
        << format_double(d.iv_25d_put) << ',' << format_double(d.iv_25d_call) << ',' << format_double(d.vix)
        << ',' << format_double(d.y10) << ',' << format_double(d.spy_close) << '\n';
  }
}

std::string panel_csv_header() {
  std::string h;
  for (auto c : kInputColumns) h += std::string(h.empty() ? "" : ",") + std::string(c);
  for (auto c : kDerivedColumns) h += "," + std::string(c);
  return h;
}

void write_panel_csv(std::ostream& out, const FeaturePanel& panel) {
  out << panel_csv_header() << '\n';
  for (const auto& r : panel.rows) {
    out << r.date.to_string();
    for (double v : {r.iv_30d, r.iv_91d, r.iv_25d_put, r.iv_25d_call, r.vix, r.y10, r.spy_close, r.ts_slope, r.skew,
                     r.rv_21d, r.hvol_30d, r.hvol_91d, r.ret_fwd}) {
      out << ',' << format_double(v);
    }
    out << '\n';
  }
}

FeaturePanel read_panel_csv(std::istream& in, std::string_view source) {
  std::vector<std::string_view> required(kInputColumns.begin(), kInputColumns.end());
  required.insert(required.end(), kDerivedColumns.begin(), kDerivedColumns.end());
  const CsvTable t(in, source, required);
  FeaturePanel panel;
  panel.rows.reserve(t.size());
  for (std::size_t r = 0; r < t.size(); ++r) {
    const RawDay d = read_raw(t, r);
    PanelRow row;
    row.date = d.date;
    row.iv_30d = d.iv_30d;
    row.iv_91d = d.iv_91d;
    row.iv_25d_put = d.iv_25d_put;
    row.iv_25d_call = d.iv_25d_call;
    row.vix = d.vix;
    row.y10 = d.y10;
    row.spy_close = d.spy_close;
    row.ts_slope = t.number(r, "ts_slope");
    row.skew = t.number(r, "skew");
    row.rv_21d = t.number(r, "rv_21d");
    row.hvol_30d = t.number(r, "hvol_30d");
    row.hvol_91d = t.number(r, "hvol_91d");
    row.ret_fwd = t.number(r, "ret_fwd");
    if (!panel.rows.empty() && !(panel.rows.back().date < row.date)) {
      throw ValidationError(t.where(r, "date") + ": dates must be strictly increasing");
    }
    panel.rows.push_back(row);
  }
  return panel;
}

FeaturePanel read_panel_csv(const std::string& path) {
  auto in = open_or_throw(path);
  return read_panel_csv(in, path);
}

}  // namespace dhedge::data
