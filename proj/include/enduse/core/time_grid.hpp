#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "enduse/core/errors.hpp"

namespace enduse {

inline constexpr int kMinutesPerDay = 1440;

/// Fixed-width discretization of one day.
struct TimeGrid {
  int step_minutes = 5;
  int steps_per_day = 288;

  static TimeGrid from_step_minutes(int step_minutes) {
    if (step_minutes <= 0 || kMinutesPerDay % step_minutes != 0)
      throw ConfigError("step_minutes must divide 1440, got " + std::to_string(step_minutes));
    return TimeGrid{step_minutes, kMinutesPerDay / step_minutes};
  }

  void validate() const {
    if (step_minutes <= 0 || steps_per_day <= 0 || step_minutes * steps_per_day != kMinutesPerDay)
      throw ConfigError("time grid must satisfy step_minutes * steps_per_day = 1440 (got " +
                        std::to_string(step_minutes) + " x " + std::to_string(steps_per_day) + ")");
  }

  std::size_t size() const noexcept { return static_cast<std::size_t>(steps_per_day); }

  /// Step index containing the given minute of day (floor).
  int step_of_minute(int minute) const noexcept { return minute / step_minutes; }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

using Date = std::chrono::year_month_day;

/// Parses a strict ISO-8601 calendar date `YYYY-MM-DD`.
inline Date parse_date(std::string_view s) {
  auto digits = [&](std::size_t pos, std::size_t n, int& out) {
    out = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
      out = out * 10 + (s[i] - '0');
    }
    return true;
  };
  int y = 0, m = 0, d = 0;
  if (s.size() != 10 || s[4] != '-' || s[7] != '-' || !digits(0, 4, y) || !digits(5, 2, m) ||
      !digits(8, 2, d))
    throw ParseError("bad date '" + std::string(s) + "', expected YYYY-MM-DD");
  Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
            std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) throw ParseError("invalid calendar date '" + std::string(s) + "'");
  return date;
}

inline std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

inline bool is_weekday(const Date& date) {
  const std::chrono::weekday wd{std::chrono::sys_days{date}};
  return wd != std::chrono::Saturday && wd != std::chrono::Sunday;
}

inline Date add_days(const Date& date, std::int64_t n) {
  return Date{std::chrono::sys_days{date} + std::chrono::days{n}};
}

}  // namespace enduse
