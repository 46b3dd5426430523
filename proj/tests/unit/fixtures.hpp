#pragma once

#include <cmath>
#include <initializer_list>
#include <numbers>
#include <string>
#include <vector>

#include "enduse/enduse.hpp"

namespace enduse::testing {

inline Date date(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

/// Grid with T steps of arbitrary width, for hand-sized fixtures. Not a valid 24h grid.
inline TimeGrid tiny_grid(int steps) { return TimeGrid{1440 / steps, steps}; }

inline DayRecord day(Date when, std::vector<std::uint8_t> states) {
  const bool present = any_on(states);
  return DayRecord{when, present, std::move(states)};
}

inline StateSeries series(std::string appliance, std::string cls,
                          std::initializer_list<std::vector<std::uint8_t>> days,
                          Date start = date(2014, 1, 6)) {
  StateSeries s{std::move(appliance), std::move(cls), {}};
  std::int64_t i = 0;
  for (const auto& d : days) s.days.push_back(day(add_days(start, i++), d));
  return s;
}

/// Smooth, clearly time-varying office-like profile: switch-on peaks in the morning,
/// switch-off peaks in the evening.
inline ProbabilityProfile office_profile(std::size_t T = 288, std::string cls = "monitor",
                                         double p_pres = 0.9, double p_init = 0.1) {
  auto p = ProbabilityProfile::constant(std::move(cls), T, 0.0, 0.0, p_pres, p_init);
  for (std::size_t t = 1; t < T; ++t) {
    const double x = static_cast<double>(t) / static_cast<double>(T);
    p.p_on[t] = 0.01 + 0.12 * std::exp(-std::pow((x - 0.36) / 0.05, 2)) +
                0.04 * std::exp(-std::pow((x - 0.55) / 0.04, 2));
    p.p_off[t] = 0.02 + 0.15 * std::exp(-std::pow((x - 0.75) / 0.06, 2)) +
                 0.03 * (0.5 + 0.5 * std::sin(2 * std::numbers::pi * 6 * x));
  }
  return p;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace enduse::testing
