#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "enduse/io/run_config.hpp"
#include "fixtures.hpp"

namespace fs = std::filesystem;
using namespace enduse;
using enduse::testing::date;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  fs::path dir;

  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() / ("enduse_cli_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  /// Runs the CLI with stdout and stderr captured into `out` and `err`.
  int enduse(const std::string& args, const std::string& env = {}) {
    const std::string cmd = env + " " + ENDUSE_CLI_PATH + " " + args + " > " + (dir / "stdout").string() + " 2> " +
                            (dir / "stderr").string();
    const int status = std::system(cmd.c_str());
    out = slurp(dir / "stdout");
    err = slurp(dir / "stderr");
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string write_config(const io::RunConfig& c, const std::string& name = "config.json") {
    const auto p = (dir / name).string();
    io::write_text_file(p, io::canonical_text(c));
    return p;
  }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  std::string out, err;
};

io::RunConfig office_config() {
  io::RunConfig c;
  c.building = office_building_fixture();
  c.validation.synthetic_classes = {"monitor", "laptop", "desktop"};
  return c;
}

}  // namespace

TEST_F(Cli, IngestCountsThresholdCrossings) {
  std::ofstream power(path("power.csv"));
  power << "appliance_id,date,step,watts\n";
  for (int t = 0; t < 288; ++t)
    power << "p1,2014-01-06,t" << t << ','
          << std::max(0.0, 50 + 60 * std::sin(2 * std::numbers::pi * 5 * t / 288.0 + 0.3)) << '\n';
  power.close();
  // steps must be integers: the fixture above is deliberately malformed first
  EXPECT_EQ(enduse("ingest " + path("power.csv") + " --out " + path("out")), 2);
  EXPECT_NE(err.find("line 2"), std::string::npos) << err;

  std::ofstream fixed(path("power.csv"));
  fixed.precision(17);
  fixed << "appliance_id,date,step,watts\n";
  for (int t = 0; t < 288; ++t) {
    const double w = std::max(0.0, 50 + 60 * std::sin(2 * std::numbers::pi * 5 * t / 288.0 + 0.3));
    fixed << "p1,2014-01-06," << t << ',' << w << '\n' << "p1,2014-01-11," << t << ',' << w << '\n';
  }
  fixed.close();
  ASSERT_EQ(enduse("ingest " + path("power.csv") + " --threshold 5 --out " + path("out")), 0) << err;
  const auto series = parse_state_csv(path("out/states.csv"), TimeGrid{});
  ASSERT_EQ(series.size(), 1u);
  ASSERT_EQ(series[0].days.size(), 1u);  // the Saturday is filtered out
  // tests/oracles/derived_values.py: 222 ON steps at threshold 5.
  EXPECT_EQ(std::count(series[0].days[0].states.begin(), series[0].days[0].states.end(), 1), 222);
  EXPECT_NE(slurp(path("out/states.csv")).find("config_sha256="), std::string::npos);
}

TEST_F(Cli, EstimateRecoversGeneratorProfile) {
  auto c = office_config();
  c.validation.synthetic_classes = {"monitor"};
  c.validation.synthetic_days = 2000;
  c.validation.appliances_per_class = 2;
  const auto cfg = write_config(c);
  ASSERT_EQ(enduse("synth --config " + cfg + " --out " + path("syn")), 0) << err;
  ASSERT_EQ(enduse("estimate --config " + cfg + " --out " + path("est") + " " + path("syn/states.csv")), 0) << err;
  EXPECT_NE(err.find("laptop"), std::string::npos);  // building classes without data are reported

  const auto truth = demo_profile("monitor");
  const auto raw = io::profile_document_from_json(io::read_json_file(path("est/monitor.raw.profile.json")));
  const auto smooth = io::profile_document_from_json(io::read_json_file(path("est/monitor.profile.json")));
  EXPECT_FALSE(raw.smoothing.has_value());
  ASSERT_TRUE(smooth.smoothing.has_value());
  EXPECT_EQ(smooth.provenance.config_sha256, io::config_digest(c));
  ASSERT_EQ(smooth.provenance.inputs.size(), 1u);
  EXPECT_EQ(smooth.provenance.inputs[0].sha256, io::sha256_file(path("syn/states.csv")));

  // Documented tolerance: 0.03 on steps with at least 1000 counted transitions.
  std::size_t dense = 0;
  for (std::size_t t = 1; t < 288; ++t) {
    if (raw.profile.on_support[t] >= 1000) {
      ++dense;
      EXPECT_NEAR(raw.profile.p_on[t], truth.p_on[t], 0.03) << t;
    }
    if (raw.profile.off_support[t] >= 1000) {
      EXPECT_NEAR(raw.profile.p_off[t], truth.p_off[t], 0.03) << t;
    }
  }
  EXPECT_GT(dense, 100u);
  EXPECT_NEAR(raw.profile.p_pres, truth.p_pres, 0.03);
  for (const char* f : {"rou.csv", "slots.json", "durations.json", "correlations.json", "diagnostics.json"})
    EXPECT_TRUE(fs::exists(path(std::string("est/") + f))) << f;
  const auto slots = io::read_json_file(path("est/slots.json"));
  EXPECT_EQ(slots["classes"][0]["model"]["n_pw"][1], 12);
}

TEST_F(Cli, EstimateAllZeroClassWarns) {
  std::vector<StateSeries> s{{"z1", "heater", {}}, {"z2", "heater", {}}};
  for (auto& x : s)
    for (int m = 0; m < 3; ++m) x.days.push_back({add_days(date(2014, 1, 6), m), false, std::vector<std::uint8_t>(288)});
  std::ofstream f(path("zeros.csv"));
  write_state_csv(f, s);
  f.close();
  ASSERT_EQ(enduse("estimate " + path("zeros.csv") + " --out " + path("est")), 0) << err;
  EXPECT_NE(err.find("p_pres = 0"), std::string::npos) << err;
  const auto doc = io::profile_document_from_json(io::read_json_file(path("est/heater.profile.json")));
  EXPECT_EQ(doc.profile.p_pres, 0.0);
  const auto diag = io::read_json_file(path("est/diagnostics.json"));
  EXPECT_TRUE(diag["classes"]["heater"]["raw"]["fallback_dominated"].get<bool>());
}

TEST_F(Cli, EstimateWritesRateOfUse) {
  StateSeries s{"m1", "monitor", {}};
  for (int m = 0; m < 80; ++m) {
    std::vector<std::uint8_t> states(288, 0);
    states[10] = 1;
    if (m < 16) states[144] = 1;
    s.days.push_back({add_days(date(2013, 9, 2), m), true, states});
  }
  std::ofstream f(path("s.csv"));
  write_state_csv(f, {s});
  f.close();
  ASSERT_EQ(enduse("estimate " + path("s.csv") + " --out " + path("est")), 0) << err;
  std::istringstream rou(slurp(path("est/rou.csv")));
  std::string line;
  std::getline(rou, line);
  EXPECT_EQ(line.rfind("# enduse.rou v1 seed=0 config_sha256=", 0), 0u);
  std::getline(rou, line);
  EXPECT_EQ(line, "step,monitor");
  for (int t = 0; t <= 144; ++t) std::getline(rou, line);
  EXPECT_EQ(line, "144,0.2");
}

TEST_F(Cli, SimulateIsReproducibleAndPlots) {
  auto c = office_config();
  c.runs = 500;
  const auto cfg = write_config(c);
  ASSERT_EQ(enduse("synth --config " + cfg + " --out " + path("syn")), 0) << err;
  const std::string args = "simulate --plot --config " + cfg + " " + path("syn/truth") + " --out ";
  ASSERT_EQ(enduse(args + path("a")), 0) << err;
  ASSERT_EQ(enduse(args + path("b"), "ENDUSE_SIM_THREADS=3"), 0) << err;
  for (const char* f : {"summary.csv", "aggregate.csv", "aggregate.svg", "monitor.svg", "laptop.svg", "desktop.svg"})
    EXPECT_EQ(slurp(path(std::string("a/") + f)), slurp(path(std::string("b/") + f))) << f;
  const auto summary = slurp(path("a/summary.csv"));
  EXPECT_EQ(summary.rfind("# enduse.summary v1 seed=0 runs=500 config_sha256=" + io::config_digest(c), 0), 0u);

  ASSERT_EQ(enduse(args + path("c") + " --seed 1"), 0) << err;
  EXPECT_NE(slurp(path("c/summary.csv")), summary);
}

TEST_F(Cli, SimulateMissingProfileIsConfigError) {
  const auto cfg = write_config(office_config());
  fs::create_directories(path("empty"));
  EXPECT_EQ(enduse("simulate --config " + cfg + " " + path("empty") + " --out " + path("o")), 3);
  EXPECT_NE(err.find("desktop"), std::string::npos) << err;
  EXPECT_EQ(enduse("simulate --config " + cfg + " --out " + path("o")), 3);
  EXPECT_EQ(enduse("simulate --out " + path("o"), "ENDUSE_SIM_THREADS=x"), 3);
}

TEST_F(Cli, SimulateZeroOccupantBuilding) {
  auto c = office_config();
  c.building.occupants.clear();
  const auto cfg = write_config(c);
  ASSERT_EQ(enduse("simulate --runs 50 --config " + cfg + " --out " + path("o")), 0) << err;
  std::istringstream agg(slurp(path("o/aggregate.csv")));
  std::string line;
  std::getline(agg, line);
  std::getline(agg, line);
  int rows = 0;
  while (std::getline(agg, line)) EXPECT_EQ(line, std::to_string(rows++) + ",0,0,0,0,0,0,0");
  EXPECT_EQ(rows, 288);
}

TEST_F(Cli, ValidateReportsChecks) {
  auto c = office_config();
  c.validation.synthetic_classes = {"monitor"};
  const auto cfg = write_config(c);
  ASSERT_EQ(enduse("validate --runs 2000 --config " + cfg + " --out " + path("ok")), 0) << out << err;
  EXPECT_EQ(out.find("FAIL"), std::string::npos) << out;
  const auto report = io::read_json_file(path("ok/validation.json"));
  EXPECT_TRUE(report["passed"].get<bool>());
  EXPECT_EQ(report["checks"].size(), 4u);

  c.validation.perturb_p_on = 0.02;
  const auto bad = write_config(c, "bad.json");
  EXPECT_EQ(enduse("validate --runs 2000 --config " + bad + " --out " + path("bad")), 4);
  EXPECT_NE(out.find("FAIL  mean identity (analytic"), std::string::npos) << out;
}

TEST_F(Cli, ValidateSkipsSingleDay) {
  const auto s = generate_synthetic({demo_profile("monitor"), 1, 3, "m"}, TimeGrid{});
  std::ofstream f(path("one.csv"));
  write_state_csv(f, {s});
  f.close();
  ASSERT_EQ(enduse("validate --runs 500 " + path("one.csv") + " --out " + path("v")), 0) << out << err;
  EXPECT_NE(out.find("SKIP  mean identity (analytic"), std::string::npos) << out;
  EXPECT_NE(out.find("SKIP  mean identity (Monte Carlo"), std::string::npos) << out;
}

TEST_F(Cli, BadConfigAndUsage) {
  io::write_text_file(path("c.json"), R"({"grid": {"step_minutes": 5}, "extra": 1})");
  EXPECT_EQ(enduse("estimate --config " + path("c.json") + " x.csv --out " + path("o")), 3);
  EXPECT_NE(err.find("extra"), std::string::npos);
  EXPECT_EQ(enduse("estimate " + path("missing.csv") + " --out " + path("o")), 2);
  EXPECT_EQ(enduse("frobnicate"), 3);
  EXPECT_EQ(enduse("--help"), 0);
}
