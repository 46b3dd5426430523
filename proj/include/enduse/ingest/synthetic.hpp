#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "enduse/core/random.hpp"
#include "enduse/core/time_grid.hpp"
#include "enduse/estimation/probability_profile.hpp"
#include "enduse/ingest/state_series.hpp"
#include "enduse/simulation/appliance.hpp"

namespace enduse {

/// Ground truth for a synthetic appliance: observed days are drawn from `true_profile`.
struct SyntheticSpec {
  ProbabilityProfile true_profile;
  std::uint64_t num_days = 1;
  std::uint64_t seed = 0;
  std::string appliance_id = "synthetic-0";
  Date start_date{std::chrono::year{2014}, std::chrono::January, std::chrono::day{6}};  // a Monday
};

/// Stream salt that keeps generator days apart from simulation runs with the same seed.
inline constexpr std::uint64_t kSyntheticStreamSalt = 0x53594E5448ULL;

/// Consecutive calendar days, each drawn from its own (seed, day) stream. The present
/// flag records the presence draw, so a present day may still be all OFF.
inline StateSeries generate_synthetic(const SyntheticSpec& spec, const TimeGrid& grid) {
  grid.validate();
  validate(spec.true_profile, grid.size());
  if (spec.num_days < 1) throw ConfigError("synthetic data needs num_days >= 1");
  StateSeries out{spec.appliance_id, spec.true_profile.class_id, {}};
  out.days.reserve(spec.num_days);
  for (std::uint64_t m = 0; m < spec.num_days; ++m) {
    RandomStream rng(spec.seed, m, kSyntheticStreamSalt);
    DayRecord d{add_days(spec.start_date, static_cast<std::int64_t>(m)), false,
                std::vector<std::uint8_t>(grid.size())};
    d.present = simulate_appliance_into(spec.true_profile, rng, std::span<std::uint8_t>(d.states));
    out.days.push_back(std::move(d));
  }
  return out;
}

}  // namespace enduse
