#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace dhedge {

// Calendar day stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}
  Date(int year, unsigned month, unsigned day);

  // Strict ISO-8601 "YYYY-MM-DD"; throws ValidationError otherwise.
  static Date parse(std::string_view iso);

  std::string to_string() const;
  int year() const;
  bool is_weekend() const;

  constexpr std::int32_t days() const { return days_; }
  constexpr Date operator+(std::int32_t n) const { return Date{days_ + n}; }
  constexpr std::int32_t operator-(Date other) const { return days_ - other.days_; }
  constexpr auto operator<=>(const Date&) const = default;

 private:
  std::int32_t days_ = 0;
};

}  // namespace dhedge
