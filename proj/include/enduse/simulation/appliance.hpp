#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "enduse/estimation/probability_profile.hpp"

namespace enduse {

/// Draws one simulated day into `states` (length T) and returns whether the appliance
/// was present. Absent days are all OFF. A present day starts ON with probability p_init
/// and then follows the two-state chain: from OFF switch on with p_on[t], from ON switch
/// off with p_off[t].
template <typename Rng>
bool simulate_appliance_into(const ProbabilityProfile& profile, Rng& rng, std::span<std::uint8_t> states) {
  const std::size_t T = states.size();
  if (!rng.bernoulli(profile.p_pres)) {
    std::fill(states.begin(), states.end(), std::uint8_t{0});
    return false;
  }
  if (T == 0) return true;
  const double* p_on = profile.p_on.data();
  const double* p_off = profile.p_off.data();
  std::uint8_t s = rng.bernoulli(profile.p_init);
  states[0] = s;
  for (std::size_t t = 1; t < T; ++t) {
    const double u = rng.uniform();
    s = s ? static_cast<std::uint8_t>(u >= p_off[t]) : static_cast<std::uint8_t>(u < p_on[t]);
    states[t] = s;
  }
  return true;
}

struct SimulatedDay {
  bool present = false;
  std::vector<std::uint8_t> states;
};

template <typename Rng>
SimulatedDay simulate_appliance(const ProbabilityProfile& profile, Rng& rng) {
  SimulatedDay day{false, std::vector<std::uint8_t>(profile.size())};
  day.present = simulate_appliance_into(profile, rng, std::span<std::uint8_t>(day.states));
  return day;
}

}  // namespace enduse
