#include "deephedge/date.hpp"

#include <charconv>
#include <cstdio>

#include "deephedge/errors.hpp"

namespace dhedge {

namespace chr = std::chrono;

Date::Date(int year, unsigned month, unsigned day) {
  const chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
  if (!ymd.ok()) {
    throw ValidationError("invalid calendar date " + std::to_string(year) + "-" +
                          std::to_string(month) + "-" + std::to_string(day));
  }
  days_ = chr::sys_days{ymd}.time_since_epoch().count();
}

Date Date::parse(std::string_view iso) {
  auto fail = [&]() -> Date { throw ValidationError("invalid ISO date '" + std::string(iso) + "'"); };
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return fail();
  auto field = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(iso.data() + pos, iso.data() + pos + len, v);
    if (ec != std::errc{} || ptr != iso.data() + pos + len) fail();
    return v;
  };
  const int y = field(0, 4);
  const int m = field(5, 2);
  const int d = field(8, 2);
  const chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(m)},
                                chr::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return fail();
  return Date{chr::sys_days{ymd}.time_since_epoch().count()};
}

std::string Date::to_string() const {
  const chr::year_month_day ymd{chr::sys_days{chr::days{days_}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

int Date::year() const {
  return static_cast<int>(chr::year_month_day{chr::sys_days{chr::days{days_}}}.year());
}

bool Date::is_weekend() const {
  const chr::weekday wd{chr::sys_days{chr::days{days_}}};
  return wd == chr::Saturday || wd == chr::Sunday;
}

}  // namespace dhedge
