#pragma once

#include <span>

#include "enduse/estimation/probability_profile.hpp"
#include "enduse/ingest/state_series.hpp"

namespace enduse {

/// Empirical ON/OFF switching probabilities plus presence and startup probabilities.
///
///   p_on[t]  = #(0 -> 1 at t) / #(0 at t-1)
///   p_off[t] = #(1 -> 0 at t) / #(1 at t-1)
///
/// counted over present days only. A zero denominator yields kFallbackProbability with
/// zero support. p_pres is the fraction of present days and p_init the fraction of
/// present days that start ON.
inline ProbabilityProfile estimate_empirical_probs(std::span<const StateSeries> observations,
                                                   const TimeGrid& grid) {
  const std::size_t T = grid.size();
  std::vector<std::uint64_t> on_num(T, 0), on_den(T, 0), off_num(T, 0), off_den(T, 0);
  std::uint64_t days = 0, present = 0, start_on = 0;

  for (const auto& s : observations) {
    validate(s, grid);
    for (const auto& d : s.days) {
      ++days;
      if (!d.present) continue;
      ++present;
      start_on += d.states[0];
      for (std::size_t t = 1; t < T; ++t) {
        const unsigned prev = d.states[t - 1], cur = d.states[t];
        on_num[t] += cur & (1u - prev);
        on_den[t] += 1u - prev;
        off_num[t] += prev & (1u - cur);
        off_den[t] += prev;
      }
    }
  }
  if (days == 0) throw EstimationError("empirical probabilities need at least one observed day");

  ProbabilityProfile p;
  p.class_id = observations.front().class_id;
  p.p_on.assign(T, kFallbackProbability);
  p.p_off.assign(T, kFallbackProbability);
  p.on_support = on_den;
  p.off_support = off_den;
  for (std::size_t t = 1; t < T; ++t) {
    if (on_den[t]) p.p_on[t] = static_cast<double>(on_num[t]) / static_cast<double>(on_den[t]);
    if (off_den[t]) p.p_off[t] = static_cast<double>(off_num[t]) / static_cast<double>(off_den[t]);
  }
  p.p_pres = static_cast<double>(present) / static_cast<double>(days);
  p.p_init = present ? static_cast<double>(start_on) / static_cast<double>(present)
                     : kFallbackProbability;
  return p;
}

}  // namespace enduse
