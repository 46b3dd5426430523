#pragma once

#include <vector>

#include "enduse/core/errors.hpp"
#include "enduse/estimation/probability_profile.hpp"

namespace enduse {

/// Closed-form mean of the simulated chain, conditioned on presence.
struct AnalyticMeanState {
  std::vector<double> g;               // 1 - p_on[t] - p_off[t]
  std::vector<double> expected_state;  // E[S_t]
  double s1_mean = 0.0;                // E[S] at the first step
};

/// E[S_0] = s1_mean, E[S_t] = p_on[t] + (1 - p_on[t] - p_off[t]) E[S_{t-1}].
/// Multiply by p_pres for the unconditional mean.
inline AnalyticMeanState analytic_mean_recursion(const ProbabilityProfile& profile, double s1_mean) {
  if (!(s1_mean >= 0.0 && s1_mean <= 1.0)) throw ConfigError("s1_mean must lie in [0, 1]");
  const std::size_t T = profile.size();
  AnalyticMeanState out{std::vector<double>(T), std::vector<double>(T), s1_mean};
  for (std::size_t t = 0; t < T; ++t) out.g[t] = 1.0 - profile.p_on[t] - profile.p_off[t];
  if (T == 0) return out;
  out.expected_state[0] = s1_mean;
  for (std::size_t t = 1; t < T; ++t)
    out.expected_state[t] = profile.p_on[t] + out.g[t] * out.expected_state[t - 1];
  return out;
}

}  // namespace enduse
