#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace enduse;
using namespace enduse::testing;

TEST(SimulateAppliance, AbsorbingOn) {
  const auto p = ProbabilityProfile::constant("x", 288, 0.3, 0.0, 1.0, 1.0);
  for (std::uint64_t r = 0; r < 50; ++r) {
    RandomStream rng(5, r);
    const auto d = simulate_appliance(p, rng);
    EXPECT_TRUE(d.present);
    EXPECT_EQ(std::count(d.states.begin(), d.states.end(), 1), 288);
  }
}

TEST(SimulateAppliance, PresenceGate) {
  const auto p = ProbabilityProfile::constant("x", 288, 0.9, 0.1, 0.0, 1.0);
  for (std::uint64_t r = 0; r < 50; ++r) {
    RandomStream rng(5, r);
    const auto d = simulate_appliance(p, rng);
    EXPECT_FALSE(d.present);
    EXPECT_FALSE(any_on(d.states));
  }
}

TEST(SimulateAppliance, MeanFollowsRecursion) {
  const auto p = ProbabilityProfile::constant("x", 288, 0.1, 0.1, 1.0, 0.0);
  const auto analytic = analytic_mean_recursion(p, 0.0);
  std::vector<double> mean(288, 0.0);
  for (std::uint64_t r = 0; r < 10'000; ++r) {
    RandomStream rng(9, r);
    const auto d = simulate_appliance(p, rng);
    for (std::size_t t = 0; t < 288; ++t) mean[t] += d.states[t] / 10'000.0;
  }
  EXPECT_LE(max_abs_diff(mean, analytic.expected_state), 0.02);
}

TEST(AnalyticMeanRecursion, NoSwitchingKeepsStartValue) {
  const auto p = ProbabilityProfile::constant("x", 100, 0.0, 0.0, 1.0, 0.0);
  const auto a = analytic_mean_recursion(p, 0.37);
  for (std::size_t t = 0; t < 100; ++t) EXPECT_DOUBLE_EQ(a.expected_state[t], 0.37);
  for (std::size_t t = 1; t < 100; ++t) EXPECT_EQ(a.g[t], 1.0);
  EXPECT_THROW(analytic_mean_recursion(p, 1.5), ConfigError);
}

TEST(AnalyticMeanRecursion, ConvergesToFixedPoint) {
  const double a = 0.05, b = 0.2;
  const auto p = ProbabilityProfile::constant("x", 288, a, b, 1.0, 0.0);
  const auto r = analytic_mean_recursion(p, 0.0);
  EXPECT_NEAR(r.expected_state.back(), a / (a + b), 1e-12);
  // geometric approach: |e_t - fixed| shrinks by |1 - a - b| each step
  const double fixed = a / (a + b);
  for (std::size_t t = 2; t < 30; ++t)
    EXPECT_NEAR(std::abs(r.expected_state[t] - fixed) / std::abs(r.expected_state[t - 1] - fixed),
                1.0 - a - b, 1e-9);
}

TEST(AnalyticMeanRecursion, ReproducesObservedMeanOnSmallFixture) {
  // Brute-force check of the equivalence identity on a hand-sized fixture.
  const TimeGrid grid = tiny_grid(6);
  const auto s = series("a", "c",
                        {{0, 1, 1, 0, 0, 1}, {1, 1, 0, 0, 1, 1}, {0, 0, 1, 1, 1, 0}, {1, 0, 0, 1, 0, 0}});
  const std::span<const StateSeries> obs(&s, 1);
  const auto p = estimate_empirical_probs(obs, grid);
  const auto observed = present_day_state_mean(obs, grid);
  const auto r = analytic_mean_recursion(p, observed[0]);
  for (std::size_t t = 0; t < 6; ++t) EXPECT_NEAR(r.expected_state[t], observed[t], 1e-12);
}

TEST(AnalyticMeanRecursion, MonotoneInSwitchOnProbability) {
  const auto base = office_profile();
  RandomStream rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    auto raised = base;
    for (std::size_t t = 1; t < raised.size(); ++t)
      raised.p_on[t] = std::min(1.0, raised.p_on[t] + 0.2 * rng.uniform());
    const auto lo = analytic_mean_recursion(base, 0.2), hi = analytic_mean_recursion(raised, 0.2);
    for (std::size_t t = 0; t < base.size(); ++t) EXPECT_GE(hi.expected_state[t], lo.expected_state[t] - 1e-15);
  }
}

TEST(CorrectAggregateVariance, ZeroCorrelationIsIndependentSum) {
  const std::map<std::string, std::vector<double>> sd{{"a", {0.5, 0.1}}, {"b", {0.2, 0.4}}};
  const std::map<std::string, std::uint64_t> n{{"a", 3}, {"b", 5}};
  const auto table = CorrelationTable::zeros({"a", "b"});
  const auto v = correct_aggregate_variance(sd, n, table);
  EXPECT_DOUBLE_EQ(v.variance[0], 3 * 0.25 + 5 * 0.04);
  EXPECT_DOUBLE_EQ(v.variance[1], 3 * 0.01 + 5 * 0.16);
  EXPECT_EQ(v.undefined_entries.size(), 4u);
}

TEST(CorrectAggregateVariance, PerfectlyCorrelatedPair) {
  const double s = 0.4;
  const std::map<std::string, std::vector<double>> sd{{"a", {s}}};
  const std::map<std::string, std::uint64_t> n{{"a", 2}};
  auto table = CorrelationTable::zeros({"a"});
  table.rho[0][0] = 1.0;
  table.defined[0][0] = true;
  const auto v = correct_aggregate_variance(sd, n, table);
  EXPECT_DOUBLE_EQ(v.variance[0], 4 * s * s);
  EXPECT_TRUE(v.undefined_entries.empty());
}

TEST(CorrectAggregateVariance, CrossTermsCountBothOrders) {
  const std::map<std::string, std::vector<double>> sd{{"a", {0.5}}, {"b", {0.3}}};
  const std::map<std::string, std::uint64_t> n{{"a", 1}, {"b", 2}};
  auto table = CorrelationTable::zeros({"a", "b"});
  table.rho = {{0.0, 0.2}, {0.2, 0.1}};
  table.defined = {{true, true}, {true, true}};
  // 1*.25 + 2*.09 + 2*1*.1*.09 + 2 * (1*2*.2*.5*.3)
  const auto v = correct_aggregate_variance(sd, n, table);
  EXPECT_NEAR(v.variance[0], 0.25 + 0.18 + 0.018 + 0.12, 1e-15);
}

TEST(CorrectAggregateVariance, NegativeIsClampedAndFlagged) {
  const std::map<std::string, std::vector<double>> sd{{"a", {0.5, 0.0}}};
  const std::map<std::string, std::uint64_t> n{{"a", 3}};
  auto table = CorrelationTable::zeros({"a"});
  table.rho[0][0] = -0.9;
  table.defined[0][0] = true;
  const auto v = correct_aggregate_variance(sd, n, table);
  EXPECT_EQ(v.variance[0], 0.0);
  EXPECT_TRUE(v.clamped[0]);
  EXPECT_FALSE(v.clamped[1]);
  EXPECT_TRUE(v.any_clamped());
}

TEST(CorrectAggregateVariance, WeightsScaleStd) {
  const std::map<std::string, std::vector<double>> sd{{"a", {0.5}}};
  const std::map<std::string, std::uint64_t> n{{"a", 4}};
  const std::map<std::string, double> w{{"a", 10.0}};
  const auto v = correct_aggregate_variance(sd, n, CorrelationTable::zeros({"a"}), &w);
  EXPECT_DOUBLE_EQ(v.variance[0], 4 * 25.0);
  const std::map<std::string, double> none;
  EXPECT_THROW(correct_aggregate_variance(sd, n, CorrelationTable::zeros({"a"}), &none), ConfigError);
}

namespace {

std::map<std::string, ProbabilityProfile> office_profiles() {
  return {{"monitor", office_profile(288, "monitor", 0.9, 0.1)},
          {"laptop", office_profile(288, "laptop", 0.8, 0.05)},
          {"desktop", office_profile(288, "desktop", 0.95, 0.6)}};
}

}  // namespace

TEST(Building, OfficeFixtureCounts) {
  const auto n = office_building_fixture().appliance_counts();
  EXPECT_EQ(n.at("monitor"), 11u);
  EXPECT_EQ(n.at("laptop"), 14u);
  EXPECT_EQ(n.at("desktop"), 5u);
}

TEST(SimulateBuilding, EmptyBuildingIsZero) {
  auto b = office_building_fixture();
  for (auto& [label, people] : b.occupants) people = 0;
  const auto s = simulate_building(b, {}, {100, 1, {}}, CorrelationTable::zeros({}));
  for (const auto& cls : s.classes) {
    for (double v : s.per_class_mean.at(cls)) EXPECT_EQ(v, 0.0);
    for (double v : s.per_class_std.at(cls)) EXPECT_EQ(v, 0.0);
  }
  for (double v : s.aggregate_mean_watts) EXPECT_EQ(v, 0.0);
  for (double v : s.aggregate_std_raw) EXPECT_EQ(v, 0.0);
  for (double v : s.aggregate_std_corrected) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(s.aggregate_mean_watts.size(), 288u);
}

TEST(SimulateBuilding, MissingProfileIsConfigError) {
  auto profiles = office_profiles();
  profiles.erase("laptop");
  EXPECT_THROW(simulate_building(office_building_fixture(), profiles, {10, 1, {}}, CorrelationTable::zeros({})),
               ConfigError);
}

TEST(SimulateBuilding, MeanMatchesAnalyticSum) {
  const auto b = office_building_fixture();
  const auto profiles = office_profiles();
  const auto s = simulate_building(b, profiles, {4000, 3, {}}, CorrelationTable::zeros({}));
  const auto n = b.appliance_counts();
  for (std::size_t t = 0; t < 288; t += 3) {
    double expected = 0.0, var = 0.0;
    for (const auto& [cls, p] : profiles) {
      const double e = p.p_pres * analytic_mean_recursion(p, p.p_init).expected_state[t];
      expected += n.at(cls) * e;
      var += n.at(cls) * e * (1 - e);
    }
    EXPECT_NEAR(s.aggregate_mean_count[t], expected, 4.5 * std::sqrt(var / 4000) + 1e-9) << t;
  }
}

TEST(SimulateBuilding, IndependentCorrectionMatchesRawStd) {
  BuildingProfile b;
  b.categories = {{"solo", {{"monitor", 2}}}};
  b.occupants = {{"solo", 1}};
  b.power_watts = {{"monitor", 30.0}};
  const std::map<std::string, ProbabilityProfile> profiles{{"monitor", office_profile(288, "monitor", 1.0, 0.2)}};
  auto table = CorrelationTable::zeros({"monitor"});
  table.defined[0][0] = true;  // rho_aa = 0
  const auto s = simulate_building(b, profiles, {10'000, 8, {}}, table);
  for (std::size_t t = 0; t < 288; ++t) {
    const double raw = s.aggregate_std_raw_count[t], corr = s.aggregate_std_corrected_count[t];
    if (raw > 0.2) {
      EXPECT_NEAR(corr / raw, 1.0, 0.05) << t;
    }
  }
  EXPECT_TRUE(s.undefined_correlations.empty());
}

TEST(SimulateBuilding, ThreadCountDoesNotChangeResults) {
  const auto b = office_building_fixture();
  const auto profiles = office_profiles();
  const auto one = simulate_building(b, profiles, {1000, 42, {}, 1}, CorrelationTable::zeros({}));
  const auto many = simulate_building(b, profiles, {1000, 42, {}, 5}, CorrelationTable::zeros({}));
  EXPECT_EQ(one.per_class_mean, many.per_class_mean);
  EXPECT_EQ(one.per_class_std, many.per_class_std);
  EXPECT_EQ(one.aggregate_std_corrected, many.aggregate_std_corrected);
  const auto other = simulate_building(b, profiles, {1000, 43, {}, 1}, CorrelationTable::zeros({}));
  EXPECT_NE(one.per_class_mean, other.per_class_mean);
}

TEST(SummarizePower, ScalesByNominalDraw) {
  SimulationSummary s;
  s.steps = 2;
  s.classes = {"a", "b"};
  s.counts = {{"a", 2}, {"b", 1}};
  s.per_class_mean = {{"a", {1.0, 0.5}}, {"b", {0.2, 0.0}}};
  s.per_class_std = {{"a", {0.3, 0.4}}, {"b", {0.1, 0.0}}};
  s.per_appliance_std = {{"a", {0.2, 0.3}}, {"b", {0.1, 0.0}}};
  s.correlations = CorrelationTable::zeros({"a", "b"});
  BuildingProfile b;
  b.power_watts = {{"a", 10.0}, {"b", 100.0}};
  const auto p = summarize_power(s, b);
  EXPECT_DOUBLE_EQ(p.mean[0], 10.0 + 20.0);
  EXPECT_DOUBLE_EQ(p.mean[1], 5.0);
  EXPECT_DOUBLE_EQ(p.std_raw[0], std::sqrt(100 * 0.09 + 10'000 * 0.01));
  EXPECT_DOUBLE_EQ(p.std_corrected[1], std::sqrt(2 * 100 * 0.09));

  b.power_watts = {{"a", 0.0}, {"b", 0.0}};
  for (double v : summarize_power(s, b).mean) EXPECT_EQ(v, 0.0);
  b.power_watts.erase("b");
  EXPECT_THROW(summarize_power(s, b), ConfigError);
}
