#pragma once

// Simulation outputs.
//
// summary.csv (one row per step and class, aggregate columns repeated per row):
//   step,class,mean_count,std_count,agg_mean_watts,agg_std_raw,agg_std_corrected
// aggregate.csv (one row per step):
//   step,agg_mean_count,agg_std_raw_count,agg_std_corrected_count,agg_mean_watts,agg_std_raw,agg_std_corrected,clamped
//
// Both start with a '#' provenance line. Numbers use %.10g so equal inputs give equal bytes.

#include <cstdio>
#include <ostream>
#include <string>

#include "enduse/simulation/engine.hpp"

namespace enduse::io {

inline constexpr const char* kSummaryHeader =
    "step,class,mean_count,std_count,agg_mean_watts,agg_std_raw,agg_std_corrected";
inline constexpr const char* kAggregateHeader =
    "step,agg_mean_count,agg_std_raw_count,agg_std_corrected_count,agg_mean_watts,agg_std_raw,"
    "agg_std_corrected,clamped";

inline std::string fmt_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string provenance_line(const char* kind, const SimulationSummary& s, const std::string& config_sha256) {
  return std::string("# ") + kind + " v1 seed=" + std::to_string(s.seed) + " runs=" + std::to_string(s.num_runs) +
         " config_sha256=" + config_sha256;
}

inline void write_summary_csv(std::ostream& out, const SimulationSummary& s, const std::string& config_sha256) {
  if (s.aggregate_mean_watts.empty()) throw ConfigError("summary has no watt aggregates (missing power_watts)");
  out << provenance_line("enduse.summary", s, config_sha256) << '\n' << kSummaryHeader << '\n';
  const std::size_t T = s.steps;
  for (std::size_t t = 0; t < T; ++t)
    for (const auto& cls : s.classes)
      out << t << ',' << cls << ',' << fmt_number(s.per_class_mean.at(cls)[t]) << ','
          << fmt_number(s.per_class_std.at(cls)[t]) << ',' << fmt_number(s.aggregate_mean_watts[t]) << ','
          << fmt_number(s.aggregate_std_raw[t]) << ',' << fmt_number(s.aggregate_std_corrected[t]) << '\n';
}

inline void write_aggregate_csv(std::ostream& out, const SimulationSummary& s, const std::string& config_sha256) {
  if (s.aggregate_mean_watts.empty()) throw ConfigError("summary has no watt aggregates (missing power_watts)");
  out << provenance_line("enduse.aggregate", s, config_sha256) << '\n' << kAggregateHeader << '\n';
  for (std::size_t t = 0; t < s.steps; ++t)
    out << t << ',' << fmt_number(s.aggregate_mean_count[t]) << ',' << fmt_number(s.aggregate_std_raw_count[t])
        << ',' << fmt_number(s.aggregate_std_corrected_count[t]) << ',' << fmt_number(s.aggregate_mean_watts[t])
        << ',' << fmt_number(s.aggregate_std_raw[t]) << ',' << fmt_number(s.aggregate_std_corrected[t]) << ','
        << (s.count_correction_clamped[t] || s.watt_correction_clamped[t] ? 1 : 0) << '\n';
}

}  // namespace enduse::io
