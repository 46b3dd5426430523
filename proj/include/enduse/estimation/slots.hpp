#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "enduse/core/errors.hpp"
#include "enduse/core/time_grid.hpp"
#include "enduse/ingest/state_series.hpp"

namespace enduse {

/// Coarse ON model: switching probability held constant inside preset time slots.
/// Slot k covers steps [boundaries[k], boundaries[k+1]) and the last slot runs to T.
struct SlotModel {
  std::string class_id;
  std::vector<std::size_t> boundaries;
  std::vector<double> p_pw;          // chance of at least one OFF->ON switch in the slot
  std::vector<std::size_t> n_pw;     // steps in the slot
  std::vector<std::uint64_t> days;   // present days behind p_pw

  std::size_t num_slots() const noexcept { return boundaries.size(); }

  /// Per-step ON probability used when simulating at grid resolution.
  double per_step_probability(std::size_t slot) const { return p_pw.at(slot) / static_cast<double>(n_pw.at(slot)); }

  std::size_t slot_end(std::size_t slot, std::size_t T) const {
    return slot + 1 < boundaries.size() ? boundaries[slot + 1] : T;
  }
};

/// Slot starts in minutes: 0-8AM, 8-9AM, 9-11:30AM, 11:30AM-1:30PM, 1:30-5PM, 5-7PM,
/// 7-9:30PM, 9:30PM-midnight.
inline constexpr std::array<int, 8> kDefaultSlotStartMinutes{0, 480, 540, 690, 810, 1020, 1140, 1290};

inline std::vector<std::size_t> default_slot_boundaries(const TimeGrid& grid) {
  grid.validate();
  std::vector<std::size_t> out;
  for (int minute : kDefaultSlotStartMinutes) {
    if (minute % grid.step_minutes != 0)
      throw ConfigError("default slots need a step width dividing 30 minutes, got " +
                        std::to_string(grid.step_minutes));
    out.push_back(static_cast<std::size_t>(minute / grid.step_minutes));
  }
  return out;
}

inline void validate_slot_boundaries(std::span<const std::size_t> boundaries, const TimeGrid& grid) {
  if (boundaries.empty() || boundaries.front() != 0)
    throw ConfigError("slot boundaries must start at step 0");
  for (std::size_t k = 1; k < boundaries.size(); ++k)
    if (boundaries[k] <= boundaries[k - 1])
      throw ConfigError("slot boundaries must be strictly increasing");
  if (boundaries.back() >= grid.size())
    throw ConfigError("slot boundary " + std::to_string(boundaries.back()) + " outside the day");
}

inline SlotModel build_slot_model(std::span<const StateSeries> observations,
                                  std::span<const std::size_t> boundaries, const TimeGrid& grid) {
  validate_slot_boundaries(boundaries, grid);
  const std::size_t T = grid.size(), K = boundaries.size();
  SlotModel m{observations.empty() ? std::string{} : observations.front().class_id,
              {boundaries.begin(), boundaries.end()},
              std::vector<double>(K, 0.0),
              std::vector<std::size_t>(K),
              std::vector<std::uint64_t>(K, 0)};
  for (std::size_t k = 0; k < K; ++k) m.n_pw[k] = m.slot_end(k, T) - boundaries[k];

  std::vector<std::uint64_t> hits(K, 0);
  for (const auto& s : observations) {
    validate(s, grid);
    for (const auto& d : s.days) {
      if (!d.present) continue;
      for (std::size_t k = 0; k < K; ++k) {
        ++m.days[k];
        for (std::size_t t = std::max<std::size_t>(boundaries[k], 1); t < m.slot_end(k, T); ++t)
          if (d.states[t] && !d.states[t - 1]) {
            ++hits[k];
            break;
          }
      }
    }
  }
  for (std::size_t k = 0; k < K; ++k)
    if (m.days[k]) m.p_pw[k] = static_cast<double>(hits[k]) / static_cast<double>(m.days[k]);
  return m;
}

/// Compares where inside a slot the first switch-on lands against the geometric law
/// implied by a constant per-step probability p_pw / n_pw.
struct SlotDiagnostic {
  std::size_t slot = 0;
  std::size_t start = 0;
  std::size_t width = 0;
  std::uint64_t events = 0;
  std::vector<double> empirical;          // P(first switch-on at offset j | at least one)
  std::vector<double> geometric;          // truncated geometric reference, same conditioning
  std::optional<double> total_variation;  // empty when the slot saw no switch-on

  bool insufficient_data() const noexcept { return !total_variation.has_value(); }
};

inline std::vector<SlotDiagnostic> slot_geometric_diagnostic(std::span<const StateSeries> observations,
                                                             const SlotModel& model,
                                                             const TimeGrid& grid) {
  validate_slot_boundaries(model.boundaries, grid);
  const std::size_t T = grid.size();
  std::vector<SlotDiagnostic> out;
  for (std::size_t k = 0; k < model.num_slots(); ++k) {
    SlotDiagnostic diag;
    diag.slot = k;
    diag.start = model.boundaries[k];
    diag.width = model.slot_end(k, T) - diag.start;
    std::vector<std::uint64_t> counts(diag.width, 0);
    for (const auto& s : observations)
      for (const auto& d : s.days) {
        if (!d.present) continue;
        for (std::size_t t = std::max<std::size_t>(diag.start, 1); t < diag.start + diag.width; ++t)
          if (d.states[t] && !d.states[t - 1]) {
            ++counts[t - diag.start];
            ++diag.events;
            break;
          }
      }

    const double q = model.per_step_probability(k);
    diag.geometric.resize(diag.width);
    const double norm = 1.0 - std::pow(1.0 - q, static_cast<double>(diag.width));
    for (std::size_t j = 0; j < diag.width; ++j)
      diag.geometric[j] = norm > 0.0 ? q * std::pow(1.0 - q, static_cast<double>(j)) / norm : 0.0;

    if (diag.events > 0) {
      diag.empirical.resize(diag.width);
      double tv = 0.0;
      for (std::size_t j = 0; j < diag.width; ++j) {
        diag.empirical[j] = static_cast<double>(counts[j]) / static_cast<double>(diag.events);
        tv += std::abs(diag.empirical[j] - diag.geometric[j]);
      }
      diag.total_variation = 0.5 * tv;
    }
    out.push_back(std::move(diag));
  }
  return out;
}

}  // namespace enduse
