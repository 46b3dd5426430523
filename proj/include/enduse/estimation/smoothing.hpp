#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "enduse/core/errors.hpp"
#include "enduse/estimation/probability_profile.hpp"

namespace enduse {

enum class Kernel { box, triangular, gaussian };

inline std::string_view to_string(Kernel k) {
  switch (k) {
    case Kernel::box: return "box";
    case Kernel::triangular: return "triangular";
    case Kernel::gaussian: return "gaussian";
  }
  return "?";
}

inline Kernel kernel_from_string(std::string_view s) {
  if (s == "box") return Kernel::box;
  if (s == "triangular") return Kernel::triangular;
  if (s == "gaussian") return Kernel::gaussian;
  throw ConfigError("unknown kernel '" + std::string(s) + "'");
}

/// Kernel smoother settings. bandwidth_steps is the half-width for box, the slope scale
/// for triangular (weight 1 - |d|/(h+1)) and the standard deviation for gaussian.
/// Zero bandwidth is the identity.
struct SmootherConfig {
  Kernel kernel = Kernel::gaussian;
  double bandwidth_steps = 3.0;
  bool circular = false;

  void validate() const {
    if (!(bandwidth_steps >= 0.0) || !std::isfinite(bandwidth_steps))
      throw ConfigError("smoothing bandwidth must be finite and >= 0");
  }

  /// Largest step offset with nonzero weight.
  std::size_t radius() const {
    const double h = bandwidth_steps;
    switch (kernel) {
      case Kernel::box: return static_cast<std::size_t>(std::floor(h));
      case Kernel::triangular: return static_cast<std::size_t>(std::ceil(h + 1.0)) - 1;
      case Kernel::gaussian: return static_cast<std::size_t>(std::ceil(4.0 * h));
    }
    return 0;
  }

  double weight(double distance) const {
    const double h = bandwidth_steps;
    if (h == 0.0) return distance == 0.0 ? 1.0 : 0.0;
    switch (kernel) {
      case Kernel::box: return distance <= h ? 1.0 : 0.0;
      case Kernel::triangular: return std::max(0.0, 1.0 - distance / (h + 1.0));
      case Kernel::gaussian: return std::exp(-0.5 * (distance / h) * (distance / h));
    }
    return 0.0;
  }

  friend bool operator==(const SmootherConfig&, const SmootherConfig&) = default;
};

struct SmoothedCurve {
  std::vector<double> values;
  /// Samples behind each smoothed value: the summed support of all window steps with
  /// nonzero weight. Zero exactly where the value is the fallback.
  std::vector<std::uint64_t> support;
};

/// Nadaraya-Watson smoothing of a per-step probability curve. Steps with zero support
/// carry fallback values rather than data and are left out of both sums. A window
/// without any supported step yields kFallbackProbability.
inline SmoothedCurve kernel_smooth_with_support(std::span<const double> profile,
                                                std::span<const std::uint64_t> support,
                                                const SmootherConfig& config) {
  config.validate();
  if (profile.size() != support.size())
    throw ConfigError("profile and support must have the same length");
  const std::size_t T = profile.size();
  const std::size_t r = config.radius();
  SmoothedCurve out{std::vector<double>(T, kFallbackProbability), std::vector<std::uint64_t>(T, 0)};

  for (std::size_t t = 0; t < T; ++t) {
    // Weighted mean written as anchor + weighted deviations, which returns constant
    // inputs bit-for-bit. The anchor is the first supported value seen in the window.
    double num = 0.0, den = 0.0, anchor = 0.0;
    bool anchored = false;
    std::uint64_t n = 0;
    const auto accumulate = [&](std::size_t i, double distance) {
      if (!support[i]) return;
      const double w = config.weight(distance);
      if (w <= 0.0) return;
      if (!anchored) {
        anchor = profile[i];
        anchored = true;
      }
      num += w * (profile[i] - anchor);
      den += w;
      n += support[i];
    };
    if (config.circular && 2 * r + 1 >= T) {
      for (std::size_t i = 0; i < T; ++i) {
        const std::size_t d = i > t ? i - t : t - i;
        accumulate(i, static_cast<double>(std::min(d, T - d)));
      }
    } else if (config.circular) {
      for (std::size_t o = 0; o <= 2 * r; ++o) {
        const std::size_t i = (t + T + o - r) % T;
        accumulate(i, static_cast<double>(o > r ? o - r : r - o));
      }
    } else {
      const std::size_t lo = t >= r ? t - r : 0;
      const std::size_t hi = std::min(T - 1, t + r);
      for (std::size_t i = lo; i <= hi; ++i)
        accumulate(i, static_cast<double>(i > t ? i - t : t - i));
    }
    if (den > 0.0) {
      out.values[t] = std::clamp(anchor + num / den, 0.0, 1.0);
      out.support[t] = n;
    }
  }
  return out;
}

inline std::vector<double> kernel_smooth(std::span<const double> profile,
                                         std::span<const std::uint64_t> support,
                                         const SmootherConfig& config) {
  return kernel_smooth_with_support(profile, support, config).values;
}

/// Smooths both switching curves of a profile. The returned supports count the samples
/// inside each kernel window, so a zero still marks a fallback value.
inline ProbabilityProfile smooth_profile(const ProbabilityProfile& raw, const SmootherConfig& config) {
  ProbabilityProfile out = raw;
  auto on = kernel_smooth_with_support(raw.p_on, raw.on_support, config);
  auto off = kernel_smooth_with_support(raw.p_off, raw.off_support, config);
  out.p_on = std::move(on.values);
  out.on_support = std::move(on.support);
  out.p_off = std::move(off.values);
  out.off_support = std::move(off.support);
  if (!out.p_on.empty()) {
    // step 0 is never a transition
    out.p_on[0] = out.p_off[0] = kFallbackProbability;
    out.on_support[0] = out.off_support[0] = 0;
  }
  return out;
}

}  // namespace enduse
