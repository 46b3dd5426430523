#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

#include "enduse/core/errors.hpp"
#include "enduse/core/time_grid.hpp"

namespace enduse {

/// One observed day of one appliance. `states[t]` is 1 when ON at step t.
struct DayRecord {
  Date date;
  bool present = false;
  std::vector<std::uint8_t> states;

  friend bool operator==(const DayRecord&, const DayRecord&) = default;
};

/// Binary ON/OFF observations of a single appliance, one record per day.
struct StateSeries {
  std::string appliance_id;
  std::string class_id;
  std::vector<DayRecord> days;

  std::size_t num_days() const noexcept { return days.size(); }

  std::size_t num_present_days() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(days.begin(), days.end(), [](const DayRecord& d) { return d.present; }));
  }

  friend bool operator==(const StateSeries&, const StateSeries&) = default;
};

/// Per-appliance power samples in watts.
struct PowerTrace {
  struct Day {
    Date date;
    std::vector<double> watts;
    friend bool operator==(const Day&, const Day&) = default;
  };

  std::string appliance_id;
  std::vector<Day> days;

  friend bool operator==(const PowerTrace&, const PowerTrace&) = default;
};

/// Presence rule for observed data: a day counts as present iff the appliance was ON at least once.
inline bool any_on(const std::vector<std::uint8_t>& states) {
  return std::any_of(states.begin(), states.end(), [](std::uint8_t s) { return s != 0; });
}

inline void validate(const StateSeries& series, const TimeGrid& grid) {
  const auto where = [&](const DayRecord& d) {
    return "appliance '" + series.appliance_id + "' on " + format_date(d.date);
  };
  for (std::size_t i = 0; i < series.days.size(); ++i) {
    const DayRecord& d = series.days[i];
    if (d.states.size() != grid.size())
      throw IntegrityError(where(d) + ": expected " + std::to_string(grid.size()) + " steps, got " +
                           std::to_string(d.states.size()));
    for (auto s : d.states)
      if (s > 1) throw IntegrityError(where(d) + ": state values must be 0 or 1");
    if (!d.present && any_on(d.states))
      throw IntegrityError(where(d) + ": absent day has ON steps");
    if (i > 0 && !(series.days[i - 1].date < d.date))
      throw IntegrityError(where(d) + ": days must be strictly increasing by date");
  }
}

inline void validate(const PowerTrace& trace, const TimeGrid& grid) {
  for (std::size_t i = 0; i < trace.days.size(); ++i) {
    const auto& d = trace.days[i];
    const auto where = "appliance '" + trace.appliance_id + "' on " + format_date(d.date);
    if (d.watts.size() != grid.size())
      throw IntegrityError(where + ": expected " + std::to_string(grid.size()) + " samples, got " +
                           std::to_string(d.watts.size()));
    for (double w : d.watts)
      if (!(w >= 0.0) || w == std::numeric_limits<double>::infinity())
        throw IntegrityError(where + ": power must be finite and >= 0");
    if (i > 0 && !(trace.days[i - 1].date < d.date))
      throw IntegrityError(where + ": days must be strictly increasing by date");
  }
}

/// Groups series by class id, preserving first-seen class order.
inline std::vector<std::pair<std::string, std::vector<StateSeries>>> group_by_class(
    const std::vector<StateSeries>& all) {
  std::vector<std::pair<std::string, std::vector<StateSeries>>> groups;
  for (const auto& s : all) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == s.class_id; });
    if (it == groups.end()) {
      groups.emplace_back(s.class_id, std::vector<StateSeries>{});
      it = std::prev(groups.end());
    }
    it->second.push_back(s);
  }
  return groups;
}

}  // namespace enduse
