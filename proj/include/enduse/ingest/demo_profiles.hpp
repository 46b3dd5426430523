#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "enduse/core/errors.hpp"
#include "enduse/core/time_grid.hpp"
#include "enduse/estimation/probability_profile.hpp"

namespace enduse {

/// Shape parameters of a smooth office-appliance profile. Times are fractions of the day.
struct DemoShape {
  double on_base, on_peak, on_peak_at, on_width;
  double off_base, off_peak, off_peak_at, off_width;
  double p_pres, p_init;
};

inline ProbabilityProfile make_demo_profile(std::string class_id, const TimeGrid& grid, const DemoShape& s) {
  grid.validate();
  const std::size_t T = grid.size();
  // Probabilities are per 5 minutes; rescale so other step widths keep the same hourly rates.
  const double scale = grid.step_minutes / 5.0;
  const auto per_step = [&](double p) { return 1.0 - std::pow(1.0 - std::min(p, 1.0), scale); };
  auto p = ProbabilityProfile::constant(std::move(class_id), T, 0.0, 0.0, s.p_pres, s.p_init);
  for (std::size_t t = 1; t < T; ++t) {
    const double x = static_cast<double>(t) / static_cast<double>(T);
    const double bump_on = std::exp(-std::pow((x - s.on_peak_at) / s.on_width, 2));
    const double bump_off = std::exp(-std::pow((x - s.off_peak_at) / s.off_width, 2));
    p.p_on[t] = per_step(s.on_base + s.on_peak * bump_on);
    p.p_off[t] = per_step(s.off_base + s.off_peak * bump_off);
  }
  return p;
}

/// Built-in profiles for the three office classes used in examples and self-checks.
inline ProbabilityProfile demo_profile(const std::string& class_id, const TimeGrid& grid = {}) {
  if (class_id == "monitor")
    return make_demo_profile(class_id, grid, {0.004, 0.10, 0.37, 0.05, 0.01, 0.12, 0.74, 0.05, 0.90, 0.08});
  if (class_id == "laptop")
    return make_demo_profile(class_id, grid, {0.006, 0.07, 0.40, 0.08, 0.03, 0.09, 0.72, 0.07, 0.85, 0.04});
  if (class_id == "desktop")
    return make_demo_profile(class_id, grid, {0.002, 0.06, 0.36, 0.04, 0.004, 0.05, 0.78, 0.05, 0.95, 0.55});
  throw ConfigError("no built-in profile for class '" + class_id + "' (monitor, laptop, desktop)");
}

}  // namespace enduse
