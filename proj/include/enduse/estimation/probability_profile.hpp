#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "enduse/core/errors.hpp"
#include "enduse/core/time_grid.hpp"

namespace enduse {

/// Probability assigned to a transition whose denominator has no samples.
inline constexpr double kFallbackProbability = 0.5;

/// Per-step switching probabilities of one appliance class.
///
/// p_on[t] is the chance of an OFF->ON switch arriving at step t, p_off[t] of ON->OFF.
/// Step 0 has no predecessor, so its entries always hold the fallback with zero support;
/// a simulated day starts from p_init instead.
struct ProbabilityProfile {
  std::string class_id;
  std::vector<double> p_on;
  std::vector<double> p_off;
  double p_pres = 1.0;
  double p_init = 0.0;
  std::vector<std::uint64_t> on_support;
  std::vector<std::uint64_t> off_support;

  std::size_t size() const noexcept { return p_on.size(); }

  /// Profile with the same ON/OFF probability at every step and full nominal support.
  static ProbabilityProfile constant(std::string class_id, std::size_t steps, double p_on,
                                     double p_off, double p_pres, double p_init) {
    ProbabilityProfile p{std::move(class_id),
                         std::vector<double>(steps, p_on),
                         std::vector<double>(steps, p_off),
                         p_pres,
                         p_init,
                         std::vector<std::uint64_t>(steps, 1),
                         std::vector<std::uint64_t>(steps, 1)};
    if (steps) {
      p.p_on[0] = p.p_off[0] = kFallbackProbability;
      p.on_support[0] = p.off_support[0] = 0;
    }
    return p;
  }

  friend bool operator==(const ProbabilityProfile&, const ProbabilityProfile&) = default;
};

inline void validate(const ProbabilityProfile& p, std::size_t steps) {
  const auto bad = [&](const std::string& what) {
    throw ConfigError("profile '" + p.class_id + "': " + what);
  };
  if (p.p_on.size() != steps || p.p_off.size() != steps || p.on_support.size() != steps ||
      p.off_support.size() != steps)
    bad("vectors must have " + std::to_string(steps) + " entries");
  const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(p.p_pres) || !in_unit(p.p_init)) bad("p_pres and p_init must lie in [0, 1]");
  for (std::size_t t = 0; t < steps; ++t) {
    if (!in_unit(p.p_on[t]) || !in_unit(p.p_off[t]))
      bad("probability outside [0, 1] at step " + std::to_string(t));
  }
}

}  // namespace enduse
