#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "enduse/core/errors.hpp"
#include "enduse/core/random.hpp"
#include "enduse/core/time_grid.hpp"
#include "enduse/estimation/correlation.hpp"
#include "enduse/estimation/probability_profile.hpp"
#include "enduse/simulation/appliance.hpp"
#include "enduse/simulation/building.hpp"
#include "enduse/simulation/variance.hpp"

namespace enduse {

struct SimulationConfig {
  std::uint64_t num_runs = 10'000;
  std::uint64_t seed = 0;
  TimeGrid grid{};
  unsigned threads = 0;  // 0 = hardware concurrency; never affects results

  void validate() const {
    if (num_runs < 1) throw ConfigError("num_runs must be >= 1");
    grid.validate();
  }
};

/// Worker count from ENDUSE_SIM_THREADS (unset, empty or 0 means automatic).
inline unsigned threads_from_env() {
  const char* v = std::getenv("ENDUSE_SIM_THREADS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 0) throw ConfigError("ENDUSE_SIM_THREADS must be a nonnegative integer");
  return static_cast<unsigned>(n);
}

inline unsigned resolve_threads(unsigned requested) {
  if (requested) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Per-step watt profile of the building.
struct PowerProfile {
  std::vector<double> mean;
  std::vector<double> std_raw;
  std::vector<double> std_corrected;
  std::vector<bool> corrected_clamped;
};

struct SimulationSummary {
  std::uint64_t num_runs = 0;
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  std::vector<std::string> classes;
  std::map<std::string, std::uint64_t> counts;  // N_a
  std::map<std::string, std::vector<double>> per_class_mean;     // mean simultaneous ON count
  std::map<std::string, std::vector<double>> per_class_std;      // std of the class ON count
  std::map<std::string, std::vector<double>> per_appliance_std;  // std of one appliance's state
  CorrelationTable correlations;

  std::vector<double> aggregate_mean_count;
  std::vector<double> aggregate_std_raw_count;
  std::vector<double> aggregate_std_corrected_count;
  std::vector<bool> count_correction_clamped;

  // Empty when some simulated class has no nominal power draw.
  std::vector<double> aggregate_mean_watts;
  std::vector<double> aggregate_std_raw;
  std::vector<double> aggregate_std_corrected;
  std::vector<bool> watt_correction_clamped;

  std::vector<std::pair<std::string, std::string>> undefined_correlations;
};

/// Watts from ON counts: mean is the draw-weighted sum of class means, the raw std adds
/// weighted class variances as independent, and the corrected std applies the
/// correlation correction with watt-scaled per-appliance stds.
inline PowerProfile summarize_power(const SimulationSummary& summary, const BuildingProfile& building) {
  std::map<std::string, double> weights;
  for (const auto& cls : summary.classes) {
    const auto it = building.power_watts.find(cls);
    if (it == building.power_watts.end())
      throw ConfigError("no nominal power draw for class '" + cls + "'");
    weights[cls] = it->second;
  }
  const std::size_t T = summary.steps;
  PowerProfile p{std::vector<double>(T, 0.0), std::vector<double>(T, 0.0), {}, {}};
  for (const auto& cls : summary.classes) {
    const double w = weights.at(cls);
    const auto& mean = summary.per_class_mean.at(cls);
    const auto& sd = summary.per_class_std.at(cls);
    for (std::size_t t = 0; t < T; ++t) {
      p.mean[t] += w * mean[t];
      p.std_raw[t] += w * w * sd[t] * sd[t];
    }
  }
  for (auto& v : p.std_raw) v = std::sqrt(v);
  auto corrected =
      correct_aggregate_variance(summary.per_appliance_std, summary.counts, summary.correlations, &weights);
  if (corrected.variance.empty()) corrected.variance.assign(T, 0.0), corrected.clamped.assign(T, false);
  p.std_corrected = corrected.std_dev();
  p.corrected_clamped = std::move(corrected.clamped);
  return p;
}

namespace detail {

struct RunMoments {
  std::vector<std::uint64_t> sum;     // [class * T + t] sum over runs of the ON count
  std::vector<std::uint64_t> sum_sq;  // same for the squared ON count
};

}  // namespace detail

/// Monte Carlo of a whole building. Each run simulates every appliance independently
/// with a stream keyed by (seed, run, appliance index), then per-class ON counts are
/// accumulated as integers, so results do not depend on the number of threads.
/// The correlation table only enters through the analytic variance correction.
inline SimulationSummary simulate_building(const BuildingProfile& building,
                                           const std::map<std::string, ProbabilityProfile>& profiles,
                                           const SimulationConfig& config,
                                           const CorrelationTable& correlations) {
  config.validate();
  building.validate();
  const std::size_t T = config.grid.size();

  SimulationSummary out;
  out.num_runs = config.num_runs;
  out.seed = config.seed;
  out.steps = T;
  out.counts = building.appliance_counts();
  out.correlations = correlations;

  struct ClassPlan {
    const ProbabilityProfile* profile;
    std::uint64_t count;
    std::uint64_t first_appliance;
  };
  std::vector<ClassPlan> plan;
  std::uint64_t next_appliance = 0;
  for (const auto& [cls, n] : out.counts) {
    out.classes.push_back(cls);
    const ProbabilityProfile* profile = nullptr;
    if (n > 0) {
      const auto it = profiles.find(cls);
      if (it == profiles.end()) throw ConfigError("no probability profile for class '" + cls + "'");
      validate(it->second, T);
      profile = &it->second;
    }
    plan.push_back({profile, n, next_appliance});
    next_appliance += n;
  }
  const std::size_t K = plan.size();

  const std::uint64_t runs = config.num_runs;
  constexpr std::uint64_t kBlock = 128;
  const std::uint64_t blocks = (runs + kBlock - 1) / kBlock;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(config.threads), blocks));
  std::vector<detail::RunMoments> partial(workers, {std::vector<std::uint64_t>(K * T, 0),
                                                    std::vector<std::uint64_t>(K * T, 0)});
  std::atomic<std::uint64_t> next_block{0};

  const auto work = [&](unsigned w) {
    auto& acc = partial[w];
    std::vector<std::uint8_t> day(T);
    std::vector<std::uint32_t> on(T);
    for (std::uint64_t b = next_block++; b < blocks; b = next_block++) {
      const std::uint64_t end = std::min(runs, (b + 1) * kBlock);
      for (std::uint64_t r = b * kBlock; r < end; ++r)
        for (std::size_t k = 0; k < K; ++k) {
          if (!plan[k].count) continue;
          std::fill(on.begin(), on.end(), 0u);
          for (std::uint64_t i = 0; i < plan[k].count; ++i) {
            RandomStream rng(config.seed, r, plan[k].first_appliance + i);
            if (!simulate_appliance_into(*plan[k].profile, rng, std::span<std::uint8_t>(day))) continue;
            for (std::size_t t = 0; t < T; ++t) on[t] += day[t];
          }
          auto* s = acc.sum.data() + k * T;
          auto* s2 = acc.sum_sq.data() + k * T;
          for (std::size_t t = 0; t < T; ++t) {
            s[t] += on[t];
            s2[t] += static_cast<std::uint64_t>(on[t]) * on[t];
          }
        }
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  detail::RunMoments total{std::vector<std::uint64_t>(K * T, 0), std::vector<std::uint64_t>(K * T, 0)};
  for (const auto& p : partial)
    for (std::size_t i = 0; i < K * T; ++i) {
      total.sum[i] += p.sum[i];
      total.sum_sq[i] += p.sum_sq[i];
    }

  const double R = static_cast<double>(runs);
  out.aggregate_mean_count.assign(T, 0.0);
  out.aggregate_std_raw_count.assign(T, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    const auto& cls = out.classes[k];
    auto& mean = out.per_class_mean[cls];
    auto& sd = out.per_class_std[cls];
    auto& unit_sd = out.per_appliance_std[cls];
    mean.assign(T, 0.0);
    sd.assign(T, 0.0);
    unit_sd.assign(T, 0.0);
    const auto n_units = static_cast<double>(plan[k].count) * R;
    for (std::size_t t = 0; t < T; ++t) {
      const std::uint64_t s = total.sum[k * T + t], s2 = total.sum_sq[k * T + t];
      mean[t] = static_cast<double>(s) / R;
      if (runs > 1) {
        // Exact integer numerators keep the result independent of summation order.
        const auto num = static_cast<long double>(runs) * s2 - static_cast<long double>(s) * s;
        sd[t] = std::sqrt(static_cast<double>(std::max(0.0L, num) / (R * (R - 1.0))));
      }
      if (n_units > 1.0) {
        // Indicator samples: sum of squares equals the sum.
        const auto num = static_cast<long double>(n_units) * s - static_cast<long double>(s) * s;
        unit_sd[t] = std::sqrt(static_cast<double>(std::max(0.0L, num) / (n_units * (n_units - 1.0))));
      }
      out.aggregate_mean_count[t] += mean[t];
      out.aggregate_std_raw_count[t] += sd[t] * sd[t];
    }
  }
  for (auto& v : out.aggregate_std_raw_count) v = std::sqrt(v);

  auto corrected = correct_aggregate_variance(out.per_appliance_std, out.counts, correlations);
  if (corrected.variance.empty()) corrected.variance.assign(T, 0.0), corrected.clamped.assign(T, false);
  out.aggregate_std_corrected_count = corrected.std_dev();
  out.count_correction_clamped = corrected.clamped;
  out.undefined_correlations = corrected.undefined_entries;

  const bool have_watts = std::all_of(out.classes.begin(), out.classes.end(), [&](const auto& cls) {
    return building.power_watts.count(cls) > 0;
  });
  if (have_watts) {
    auto power = summarize_power(out, building);
    out.aggregate_mean_watts = std::move(power.mean);
    out.aggregate_std_raw = std::move(power.std_raw);
    out.aggregate_std_corrected = std::move(power.std_corrected);
    out.watt_correction_clamped = std::move(power.corrected_clamped);
  }
  return out;
}

}  // namespace enduse
