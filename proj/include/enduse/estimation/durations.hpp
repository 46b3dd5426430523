#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "enduse/core/errors.hpp"
#include "enduse/ingest/state_series.hpp"

namespace enduse {

struct GammaFit {
  double shape = 0.0;
  double scale = 0.0;
};

/// ON-run length statistics. Runs cut by midnight are counted at their observed length.
struct DurationModel {
  std::string class_id;
  std::map<std::size_t, std::uint64_t> histogram;  // run length in steps -> count
  std::optional<GammaFit> gamma;                   // needs two distinct run lengths

  std::uint64_t total_runs() const {
    std::uint64_t n = 0;
    for (const auto& [len, c] : histogram) n += c;
    return n;
  }
};

/// Maximal ON runs of one day, in order.
inline std::vector<std::size_t> on_runs(std::span<const std::uint8_t> states) {
  std::vector<std::size_t> runs;
  std::size_t len = 0;
  for (auto s : states) {
    if (s) {
      ++len;
    } else if (len) {
      runs.push_back(len);
      len = 0;
    }
  }
  if (len) runs.push_back(len);
  return runs;
}

/// Method-of-moments gamma fit: shape = mean^2 / var, scale = var / mean (sample variance).
inline std::optional<GammaFit> fit_gamma_moments(const std::map<std::size_t, std::uint64_t>& histogram) {
  double n = 0.0, sum = 0.0;
  for (const auto& [len, c] : histogram) {
    n += static_cast<double>(c);
    sum += static_cast<double>(c) * static_cast<double>(len);
  }
  if (n < 2.0) return std::nullopt;
  const double mean = sum / n;
  double ss = 0.0;
  for (const auto& [len, c] : histogram) {
    const double d = static_cast<double>(len) - mean;
    ss += static_cast<double>(c) * d * d;
  }
  const double var = ss / (n - 1.0);
  if (!(var > 0.0)) return std::nullopt;
  return GammaFit{mean * mean / var, var / mean};
}

inline DurationModel estimate_durations(std::span<const StateSeries> observations) {
  DurationModel m;
  if (!observations.empty()) m.class_id = observations.front().class_id;
  for (const auto& s : observations)
    for (const auto& d : s.days)
      for (auto len : on_runs(d.states)) ++m.histogram[len];
  if (m.histogram.empty()) throw EstimationError("no ON runs to build duration statistics from");
  m.gamma = fit_gamma_moments(m.histogram);
  return m;
}

/// Logistic attenuation of a duration weight curve past a switch-off time.
struct OffEnforcement {
  double t_off = 0.0;
  double lambda = 1.0;
};

/// d[t] = d0[t] / (1 + exp((t - t_off) / lambda)). Not renormalized.
inline std::vector<double> apply_off_enforcement(std::span<const double> d0, const OffEnforcement& e) {
  if (!(e.lambda > 0.0) || !std::isfinite(e.lambda)) throw ConfigError("lambda must be > 0");
  if (!(e.t_off >= 0.0) || e.t_off >= static_cast<double>(d0.size()))
    throw ConfigError("t_off must lie inside the day");
  std::vector<double> d(d0.size());
  for (std::size_t t = 0; t < d0.size(); ++t)
    d[t] = d0[t] / (1.0 + std::exp((static_cast<double>(t) - e.t_off) / e.lambda));
  return d;
}

}  // namespace enduse
