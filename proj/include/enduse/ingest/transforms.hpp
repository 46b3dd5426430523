#pragma once

#include <string>

#include "enduse/ingest/state_series.hpp"

namespace enduse {

/// ON exactly where power is strictly above the threshold.
inline StateSeries threshold_extract(const PowerTrace& trace, double threshold_watts,
                                     std::string class_id = {}) {
  if (!(threshold_watts >= 0.0)) throw ConfigError("threshold must be >= 0");
  StateSeries out{trace.appliance_id, class_id.empty() ? trace.appliance_id : std::move(class_id), {}};
  out.days.reserve(trace.days.size());
  for (const auto& d : trace.days) {
    DayRecord rec{d.date, false, std::vector<std::uint8_t>(d.watts.size())};
    for (std::size_t t = 0; t < d.watts.size(); ++t) rec.states[t] = d.watts[t] > threshold_watts;
    rec.present = any_on(rec.states);
    out.days.push_back(std::move(rec));
  }
  return out;
}

/// Keeps Monday..Friday records, order preserved.
inline StateSeries filter_weekdays(const StateSeries& series) {
  StateSeries out{series.appliance_id, series.class_id, {}};
  for (const auto& d : series.days)
    if (is_weekday(d.date)) out.days.push_back(d);
  return out;
}

}  // namespace enduse
