#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "enduse/core/errors.hpp"
#include "enduse/core/time_grid.hpp"
#include "enduse/ingest/state_series.hpp"

namespace enduse {

/// Rate of use: fraction of observed days on which the class was ON at each step.
struct RouProfile {
  std::string class_id;
  std::vector<double> rou;
  std::vector<std::uint64_t> support;
};

inline RouProfile estimate_rou(std::span<const StateSeries> observations, const TimeGrid& grid) {
  const std::size_t T = grid.size();
  RouProfile out{observations.empty() ? std::string{} : observations.front().class_id,
                 std::vector<double>(T, 0.0), std::vector<std::uint64_t>(T, 0)};
  std::vector<std::uint64_t> on(T, 0);
  for (const auto& s : observations) {
    validate(s, grid);
    for (const auto& d : s.days)
      for (std::size_t t = 0; t < T; ++t) {
        on[t] += d.states[t];
        ++out.support[t];
      }
  }
  if (out.support.empty() || out.support[0] == 0)
    throw EstimationError("rate of use needs at least one observed day");
  for (std::size_t t = 0; t < T; ++t)
    out.rou[t] = static_cast<double>(on[t]) / static_cast<double>(out.support[t]);
  return out;
}

/// Mean state per step over present days only. This is the observed average that the
/// two-state chain fitted to the same days reproduces exactly in expectation.
inline std::vector<double> present_day_state_mean(std::span<const StateSeries> observations,
                                                  const TimeGrid& grid) {
  const std::size_t T = grid.size();
  std::vector<std::uint64_t> on(T, 0);
  std::uint64_t n = 0;
  for (const auto& s : observations)
    for (const auto& d : s.days) {
      if (!d.present) continue;
      ++n;
      for (std::size_t t = 0; t < T; ++t) on[t] += d.states[t];
    }
  if (n == 0) throw EstimationError("no present days");
  std::vector<double> mean(T);
  for (std::size_t t = 0; t < T; ++t) mean[t] = static_cast<double>(on[t]) / static_cast<double>(n);
  return mean;
}

}  // namespace enduse
