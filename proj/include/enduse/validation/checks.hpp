#pragma once

// Self-checks run by `enduse validate`: the chain-versus-observation mean identity,
// estimator consistency on generated data, and the correlated-sum variance oracle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "enduse/core/random.hpp"
#include "enduse/estimation/correlation.hpp"
#include "enduse/estimation/empirical.hpp"
#include "enduse/estimation/rou.hpp"
#include "enduse/ingest/synthetic.hpp"
#include "enduse/simulation/appliance.hpp"
#include "enduse/simulation/recursion.hpp"
#include "enduse/simulation/variance.hpp"

namespace enduse::validation {

enum class Status { passed, failed, skipped };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::passed: return "PASS";
    case Status::failed: return "FAIL";
    case Status::skipped: return "SKIP";
  }
  return "?";
}

struct CheckResult {
  std::string name;
  Status status = Status::skipped;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

inline constexpr double kExactTolerance = 1e-10;

/// Raises p_on by delta on every transition step (clamped to [0, 1]).
inline ProbabilityProfile perturb_on(ProbabilityProfile p, double delta) {
  for (std::size_t t = 1; t < p.size(); ++t) p.p_on[t] = std::clamp(p.p_on[t] + delta, 0.0, 1.0);
  return p;
}

namespace detail {

inline bool enough_support(const ProbabilityProfile& p, std::uint64_t present_days) {
  if (present_days < 2) return false;
  for (std::size_t t = 1; t < p.size(); ++t)
    if (p.on_support[t] && p.off_support[t]) return true;
  return false;
}

inline std::uint64_t present_days(std::span<const StateSeries> obs) {
  std::uint64_t n = 0;
  for (const auto& s : obs) n += s.num_present_days();
  return n;
}

}  // namespace detail

/// The recursion seeded with the observed first-step mean must land on the observed
/// mean at every step where both switching probabilities were estimated from data.
inline CheckResult check_mean_identity(std::span<const StateSeries> observations, const TimeGrid& grid,
                                       double perturb = 0.0) {
  CheckResult r{"mean identity (analytic recursion vs observed mean)", Status::skipped, 0.0, kExactTolerance, {}};
  const auto raw = estimate_empirical_probs(observations, grid);
  if (!detail::enough_support(raw, detail::present_days(observations))) {
    r.detail = "support too sparse";
    return r;
  }
  const auto profile = perturb_on(raw, perturb);
  const auto observed = present_day_state_mean(observations, grid);
  const auto analytic = analytic_mean_recursion(profile, observed[0]);
  std::size_t steps = 0;
  for (std::size_t t = 0; t < grid.size(); ++t) {
    if (t > 0 && !(raw.on_support[t] && raw.off_support[t])) continue;
    ++steps;
    r.measured = std::max(r.measured, std::abs(analytic.expected_state[t] - observed[t]));
  }
  r.status = r.measured <= r.tolerance ? Status::passed : Status::failed;
  r.detail = "max |E[S_t] - mean_t| over " + std::to_string(steps) + " supported steps";
  return r;
}

struct MonteCarloMean {
  std::vector<double> mean;
  std::vector<double> observed;
  std::vector<double> bound;  // 4 sqrt(m (1 - m) / R) + 1e-6
};

/// Simulates the estimated chain conditioned on presence and averages R runs.
inline MonteCarloMean monte_carlo_mean(const ProbabilityProfile& profile, const std::vector<double>& observed,
                                       std::uint64_t runs, std::uint64_t seed) {
  auto present = profile;
  present.p_pres = 1.0;
  const std::size_t T = profile.size();
  std::vector<std::uint64_t> on(T, 0);
  std::vector<std::uint8_t> day(T);
  for (std::uint64_t r = 0; r < runs; ++r) {
    RandomStream rng(seed, r, 0x4D45414EULL);
    simulate_appliance_into(present, rng, std::span<std::uint8_t>(day));
    for (std::size_t t = 0; t < T; ++t) on[t] += day[t];
  }
  MonteCarloMean out{std::vector<double>(T), observed, std::vector<double>(T)};
  const double R = static_cast<double>(runs);
  for (std::size_t t = 0; t < T; ++t) {
    out.mean[t] = static_cast<double>(on[t]) / R;
    out.bound[t] = 4.0 * std::sqrt(observed[t] * (1.0 - observed[t]) / R) + 1e-6;
  }
  return out;
}

/// Monte Carlo mean of the estimated chain versus the observed mean, per step within
/// four binomial standard errors. `measured` is the largest deviation/bound ratio.
inline CheckResult check_monte_carlo_mean(std::span<const StateSeries> observations, const TimeGrid& grid,
                                          std::uint64_t runs, std::uint64_t seed, double perturb = 0.0) {
  CheckResult r{"mean identity (Monte Carlo vs observed mean)", Status::skipped, 0.0, 1.0, {}};
  const auto raw = estimate_empirical_probs(observations, grid);
  if (!detail::enough_support(raw, detail::present_days(observations))) {
    r.detail = "support too sparse";
    return r;
  }
  const auto mc = monte_carlo_mean(perturb_on(raw, perturb), present_day_state_mean(observations, grid), runs, seed);
  double worst_dev = 0.0;
  for (std::size_t t = 0; t < grid.size(); ++t) {
    const double dev = std::abs(mc.mean[t] - mc.observed[t]);
    worst_dev = std::max(worst_dev, dev);
    r.measured = std::max(r.measured, dev / mc.bound[t]);
  }
  r.status = r.measured <= r.tolerance ? Status::passed : Status::failed;
  std::ostringstream d;
  d << "max |MC mean - observed| = " << worst_dev << " over " << runs << " runs; ratio to 4-sigma bound";
  r.detail = d.str();
  return r;
}

struct LadderRung {
  std::uint64_t days = 0;
  double max_error = 0.0;          // over steps with support >= 1
  double max_error_dense = 0.0;    // over steps with support >= dense_support
  std::size_t dense_steps = 0;
};

/// Estimates from data generated by `truth` at growing sample sizes.
inline std::vector<LadderRung> consistency_ladder(const ProbabilityProfile& truth, const TimeGrid& grid,
                                                  std::span<const std::uint64_t> day_counts, std::uint64_t seed,
                                                  std::uint64_t dense_support) {
  std::vector<LadderRung> rungs;
  for (std::size_t i = 0; i < day_counts.size(); ++i) {
    const auto s = generate_synthetic({truth, day_counts[i], stream_key(seed, i, 0x4C41444452ULL)}, grid);
    const auto est = estimate_empirical_probs(std::span<const StateSeries>(&s, 1), grid);
    LadderRung rung{day_counts[i], 0.0, 0.0, 0};
    for (std::size_t t = 1; t < grid.size(); ++t) {
      const auto consider = [&](std::uint64_t support, double err) {
        if (support >= 1) rung.max_error = std::max(rung.max_error, err);
        if (support >= dense_support) rung.max_error_dense = std::max(rung.max_error_dense, err);
      };
      consider(est.on_support[t], std::abs(est.p_on[t] - truth.p_on[t]));
      consider(est.off_support[t], std::abs(est.p_off[t] - truth.p_off[t]));
      rung.dense_steps += est.on_support[t] >= dense_support;
    }
    rungs.push_back(rung);
  }
  return rungs;
}

/// Errors must shrink along the ladder and the last rung must be within tolerance on
/// well-supported steps.
inline CheckResult check_consistency_ladder(const ProbabilityProfile& truth, const TimeGrid& grid, std::uint64_t seed,
                                            double tolerance = 0.03, std::uint64_t dense_support = 1000) {
  static constexpr std::uint64_t kDays[] = {100, 1000, 10'000};
  CheckResult r{"estimator consistency ladder (" + truth.class_id + ")", Status::skipped, 0.0, tolerance, {}};
  const auto rungs = consistency_ladder(truth, grid, kDays, seed, dense_support);
  bool decreasing = true;
  std::ostringstream d;
  d << "max error by days:";
  for (std::size_t i = 0; i < rungs.size(); ++i) {
    d << ' ' << rungs[i].days << '=' << rungs[i].max_error;
    if (i > 0 && !(rungs[i].max_error < rungs[i - 1].max_error)) decreasing = false;
  }
  r.measured = rungs.back().max_error_dense;
  d << "; last rung on support>=" << dense_support << ": " << r.measured;
  if (!decreasing) d << "; NOT decreasing";
  r.detail = d.str();
  r.status = decreasing && r.measured <= tolerance ? Status::passed : Status::failed;
  return r;
}

/// Two classes whose appliances copy a shared Bernoulli shock with probability w and
/// otherwise draw independently with the same marginal q_t. Any two appliances of
/// classes a, b then have correlation w_a * w_b.
struct CommonShockFixture {
  std::uint64_t count_a = 8, count_b = 6;
  double mix_a = 0.6, mix_b = 0.4;
  std::uint64_t observed_days = 2000;
  std::uint64_t runs = 10'000;

  double marginal(std::size_t t, std::size_t T) const {
    const double x = static_cast<double>(t) / static_cast<double>(T);
    return 0.1 + 0.75 * std::exp(-std::pow((x - 0.5) / 0.18, 2));
  }

  /// States of all appliances (class A first) at every step of one day.
  void draw_day(RandomStream& rng, std::size_t T, std::vector<std::vector<std::uint8_t>>& states) const {
    const std::size_t n = count_a + count_b;
    states.assign(n, std::vector<std::uint8_t>(T));
    for (std::size_t t = 0; t < T; ++t) {
      const double q = marginal(t, T);
      const bool shock = rng.bernoulli(q);
      for (std::size_t i = 0; i < n; ++i) {
        const double w = i < count_a ? mix_a : mix_b;
        states[i][t] = rng.bernoulli(w) ? shock : rng.bernoulli(q);
      }
    }
  }
};

struct VarianceOracleResult {
  CorrelationTable table;
  std::vector<double> empirical_std;    // brute-force joint simulation
  std::vector<double> corrected_std;    // correlation-corrected formula
  std::vector<double> independent_std;  // formula with all correlations zero
  double max_relative_error = 0.0;      // over steps with empirical std >= min_std
  bool independent_understates = true;  // independent < empirical on every such step
  std::size_t steps_checked = 0;
};

inline VarianceOracleResult run_variance_oracle(const CommonShockFixture& fx, const TimeGrid& grid,
                                                std::uint64_t seed, double min_std = 0.2) {
  const std::size_t T = grid.size();
  const std::size_t n = fx.count_a + fx.count_b;
  std::vector<std::vector<std::uint8_t>> day;

  // Observations for the correlation estimate.
  std::vector<StateSeries> obs(n);
  for (std::size_t i = 0; i < n; ++i) {
    obs[i].appliance_id = (i < fx.count_a ? "a" : "b") + std::to_string(i);
    obs[i].class_id = i < fx.count_a ? "A" : "B";
  }
  const Date start{std::chrono::year{2014}, std::chrono::January, std::chrono::day{6}};
  for (std::uint64_t m = 0; m < fx.observed_days; ++m) {
    RandomStream rng(seed, m, 0x4F4253ULL);
    fx.draw_day(rng, T, day);
    for (std::size_t i = 0; i < n; ++i) {
      DayRecord rec{add_days(start, static_cast<std::int64_t>(m)), any_on(day[i]), day[i]};
      obs[i].days.push_back(std::move(rec));
    }
  }
  VarianceOracleResult out;
  out.table = estimate_correlations(obs, grid, {"A", "B"});

  // Brute-force joint simulation of the aggregate and of single-appliance indicators.
  std::vector<double> sum(T, 0.0), sum_sq(T, 0.0), on_a(T, 0.0), on_b(T, 0.0);
  for (std::uint64_t r = 0; r < fx.runs; ++r) {
    RandomStream rng(seed, r, 0x4A4F494E54ULL);
    fx.draw_day(rng, T, day);
    for (std::size_t t = 0; t < T; ++t) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        total += day[i][t];
        (i < fx.count_a ? on_a : on_b)[t] += day[i][t];
      }
      sum[t] += total;
      sum_sq[t] += total * total;
    }
  }
  const double R = static_cast<double>(fx.runs);
  const auto unit_std = [&](double on, double units) {
    const double p = on / units;
    return std::sqrt(std::max(0.0, p * (1.0 - p) * units / (units - 1.0)));
  };
  std::map<std::string, std::vector<double>> per_unit{{"A", std::vector<double>(T)}, {"B", std::vector<double>(T)}};
  out.empirical_std.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    out.empirical_std[t] = std::sqrt(std::max(0.0, (sum_sq[t] - sum[t] * sum[t] / R) / (R - 1.0)));
    per_unit["A"][t] = unit_std(on_a[t], R * static_cast<double>(fx.count_a));
    per_unit["B"][t] = unit_std(on_b[t], R * static_cast<double>(fx.count_b));
  }
  const std::map<std::string, std::uint64_t> counts{{"A", fx.count_a}, {"B", fx.count_b}};
  out.corrected_std = correct_aggregate_variance(per_unit, counts, out.table).std_dev();
  out.independent_std = correct_aggregate_variance(per_unit, counts, CorrelationTable::zeros({"A", "B"})).std_dev();

  for (std::size_t t = 0; t < T; ++t) {
    if (out.empirical_std[t] < min_std) continue;
    ++out.steps_checked;
    out.max_relative_error =
        std::max(out.max_relative_error, std::abs(out.corrected_std[t] - out.empirical_std[t]) / out.empirical_std[t]);
    if (!(out.independent_std[t] < out.empirical_std[t])) out.independent_understates = false;
  }
  return out;
}

inline CheckResult check_variance_correction(const TimeGrid& grid, std::uint64_t seed, double tolerance = 0.10) {
  CheckResult r{"variance correction vs correlated brute force", Status::skipped, 0.0, tolerance, {}};
  const auto res = run_variance_oracle(CommonShockFixture{}, grid, seed);
  if (res.steps_checked == 0) {
    r.detail = "no step with empirical std >= 0.2";
    return r;
  }
  r.measured = res.max_relative_error;
  std::ostringstream d;
  d << "max relative error over " << res.steps_checked << " steps; rho_AA=" << res.table.rho[0][0]
    << " rho_AB=" << res.table.rho[0][1] << " rho_BB=" << res.table.rho[1][1]
    << (res.independent_understates ? "; independent sum understates" : "; independent sum does NOT understate");
  r.detail = d.str();
  r.status = res.max_relative_error <= tolerance && res.independent_understates ? Status::passed : Status::failed;
  return r;
}

}  // namespace enduse::validation
