#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "enduse/core/errors.hpp"
#include "enduse/estimation/correlation.hpp"

namespace enduse {

struct CorrectedVariance {
  std::vector<double> variance;
  std::vector<bool> clamped;  // step where the formula went negative and was set to 0
  std::vector<std::pair<std::string, std::string>> undefined_entries;  // read as 0

  bool any_clamped() const { return std::find(clamped.begin(), clamped.end(), true) != clamped.end(); }

  std::vector<double> std_dev() const {
    std::vector<double> s(variance.size());
    for (std::size_t t = 0; t < s.size(); ++t) s[t] = std::sqrt(variance[t]);
    return s;
  }
};

/// Variance of a sum of identically distributed appliances per class, with average
/// within-class and cross-class correlations:
///
///   var[t] = sum_a N_a s_a^2 + sum_a N_a (N_a - 1) rho_aa s_a^2
///          + sum_{a != b} N_a N_b rho_ab s_a s_b
///
/// where s_a is the std of ONE appliance of class a, optionally scaled by weights[a]
/// (e.g. watts) to get the variance of a weighted sum.
inline CorrectedVariance correct_aggregate_variance(
    const std::map<std::string, std::vector<double>>& per_appliance_std,
    const std::map<std::string, std::uint64_t>& counts, const CorrelationTable& correlations,
    const std::map<std::string, double>* weights = nullptr) {
  struct Term {
    std::string cls;
    double n;
    const std::vector<double>* std;
    double w;
  };
  std::vector<Term> terms;
  std::size_t T = 0;
  bool sized = false;
  for (const auto& [cls, n] : counts) {
    if (n == 0) continue;
    const auto it = per_appliance_std.find(cls);
    if (it == per_appliance_std.end()) throw ConfigError("no std curve for class '" + cls + "'");
    double w = 1.0;
    if (weights) {
      const auto wi = weights->find(cls);
      if (wi == weights->end()) throw ConfigError("no weight for class '" + cls + "'");
      w = wi->second;
    }
    if (sized && it->second.size() != T) throw ConfigError("std curves differ in length");
    T = it->second.size();
    sized = true;
    for (double s : it->second)
      if (!(s >= 0.0)) throw ConfigError("std of class '" + cls + "' must be >= 0");
    terms.push_back({cls, static_cast<double>(n), &it->second, w});
  }

  CorrectedVariance out{std::vector<double>(T, 0.0), std::vector<bool>(T, false), {}};
  for (const auto& a : terms)
    for (const auto& b : terms) {
      const bool self = a.cls == b.cls;
      if (self && a.n < 2.0) continue;
      if (!correlations.is_defined(a.cls, b.cls)) out.undefined_entries.emplace_back(a.cls, b.cls);
    }

  for (std::size_t t = 0; t < T; ++t) {
    double v = 0.0;
    for (const auto& a : terms) {
      const double sa = a.w * (*a.std)[t];
      v += a.n * sa * sa;
      v += a.n * (a.n - 1.0) * correlations.value(a.cls, a.cls) * sa * sa;
      for (const auto& b : terms) {
        if (a.cls == b.cls) continue;
        const double sb = b.w * (*b.std)[t];
        v += a.n * b.n * correlations.value(a.cls, b.cls) * sa * sb;
      }
    }
    if (v < 0.0) {
      out.clamped[t] = true;
      v = 0.0;
    }
    out.variance[t] = v;
  }
  return out;
}

}  // namespace enduse
