#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "msel/harness/config.hpp"
#include "msel/harness/experiments.hpp"
#include "msel/harness/report.hpp"

using namespace msel::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("msel_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small(ExperimentKind kind, std::size_t reps) {
  auto c = ExperimentConfig::defaults(kind);
  c.replicates = reps;
  c.workers = 1;
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MSEL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Format, NumbersRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  Table t({"a", "b"});
  t.add(1.5, true);
  t.add(std::string("x,y"), 3);
  EXPECT_EQ(t.to_csv(), "a,b\n1.5,1\n\"x,y\",3\n");
  EXPECT_THROW(t.add(1), std::invalid_argument);
}

TEST(Config, JsonRoundTrip) {
  for (auto kind : {ExperimentKind::verify_tail, ExperimentKind::holdout_adapt, ExperimentKind::calibrate,
                    ExperimentKind::akaike_check, ExperimentKind::segment}) {
    auto c = ExperimentConfig::defaults(kind);
    c.seed = 99;
    c.slope_at_most = -0.75;
    EXPECT_EQ(config_from_json(to_json(c)), c) << to_string(kind);
  }
}

TEST(Config, MissingFieldsTakeKindDefaults) {
  const auto c = config_from_json(json::parse(R"({"kind": "calibrate", "seed": 3})"));
  auto expected = ExperimentConfig::defaults(ExperimentKind::calibrate);
  expected.seed = 3;
  EXPECT_EQ(c, expected);
}

TEST(Config, ValidationListsEveryProblem) {
  const auto j = json::parse(R"({"kind": "verify-tail", "replicates": 0, "epsilon": 1.5, "bogus": 1,
                                 "split": "random", "modulus": {"p": 1.0}})");
  try {
    config_from_json(j);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    const auto& p = e.problems();
    auto has = [&](const std::string& prefix) {
      return std::any_of(p.begin(), p.end(), [&](const std::string& s) { return s.rfind(prefix, 0) == 0; });
    };
    EXPECT_TRUE(has("bogus"));
    EXPECT_TRUE(has("replicates"));
    EXPECT_TRUE(has("epsilon"));
    EXPECT_TRUE(has("split"));
    EXPECT_TRUE(has("modulus.p"));
  }
  EXPECT_THROW(config_from_json(json::parse(R"({"kind": "nope"})")), ValidationError);
  EXPECT_THROW(config_from_json(json::parse(R"({"kind": "segment", "seed": "x"})")), ValidationError);
}

TEST(Experiments, VerifyTailSmoke) {
  const auto rec = run(small(ExperimentKind::verify_tail, 10));
  EXPECT_EQ(rec.replicates.size(), 10u);
  EXPECT_TRUE(rec.aggregates.at("underpowered").get<bool>());
  ASSERT_NE(rec.curve("models"), nullptr);
  EXPECT_EQ(rec.curve("models")->size(), 5u);
  EXPECT_EQ(rec.checks.size(), 3u);
}

TEST(Experiments, SameSeedGivesIdenticalRecords) {
  auto c = small(ExperimentKind::verify_tail, 50);
  const auto a = run(c);
  c.workers = 3;
  const auto b = run(c);
  EXPECT_EQ(a.replicates.to_csv(), b.replicates.to_csv());
  c.seed = 2;
  const auto d = run(c);
  EXPECT_NE(a.replicates.to_csv(), d.replicates.to_csv());
}

TEST(Experiments, HoldoutAdaptReportsSlope) {
  auto c = small(ExperimentKind::holdout_adapt, 5);
  c.ns = {50, 100, 200, 400, 800};
  const auto rec = run(c);
  ASSERT_NE(rec.curve("excess_vs_n"), nullptr);
  EXPECT_EQ(rec.curve("excess_vs_n")->size(), 5u);
  EXPECT_EQ(rec.replicates.size(), 25u);
  EXPECT_TRUE(rec.aggregates.contains("slope"));
}

TEST(Experiments, SegmentAndCalibrateSmoke) {
  auto s = small(ExperimentKind::segment, 3);
  const auto seg = run(s);
  EXPECT_EQ(seg.replicates.size(), 3u);
  EXPECT_EQ(seg.curve("signal_replicate0")->size(), s.changepoint.n);
  auto c = small(ExperimentKind::calibrate, 3);
  const auto cal = run(c);
  EXPECT_EQ(cal.curve("risk_vs_alpha")->size(), c.grid.points);
  auto a = small(ExperimentKind::akaike_check, 3);
  const auto ak = run(a);
  EXPECT_EQ(ak.replicates.size(), 9u);
}

TEST(Report, PassthroughAndSideBySide) {
  const fs::path dir = scratch("report");
  auto c = small(ExperimentKind::verify_tail, 5);
  const auto a = run(c);
  a.write(dir / "a");
  c.seed = 7;
  const auto b = run(c);
  b.write(dir / "b");
  EXPECT_TRUE(fs::exists(dir / "a" / "record.json"));
  EXPECT_TRUE(fs::exists(dir / "a" / "replicates.csv"));
  EXPECT_FALSE(fs::exists(dir / "a" / "record.json.tmp"));

  const auto one = report({load_record(dir / "a")});
  ASSERT_EQ(one.size(), 1u);
  const auto& cols = one.columns();
  const auto at = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(cols.begin(), cols.end(), name) - cols.begin());
  };
  EXPECT_EQ(one.rows()[0][at("violation_frequency")], format_number(a.aggregates["violation_frequency"].get<double>()));
  EXPECT_EQ(one.rows()[0][at("seed")], "1");

  const auto both = report({load_record(dir / "a"), load_record(dir / "b" / "record.json")});
  EXPECT_EQ(both.size(), 2u);
  EXPECT_EQ(both.rows()[1][at("seed")], "7");

  auto s = small(ExperimentKind::segment, 2);
  run(s).write(dir / "s");
  EXPECT_THROW(report({load_record(dir / "a"), load_record(dir / "s")}), std::invalid_argument);
  EXPECT_THROW(load_record(dir / "missing"), std::runtime_error);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  const std::string out = " --out " + (dir / "run").string();
  EXPECT_EQ(run_cli("verify-tail --replicates 5 --workers 1" + out), 0);
  EXPECT_TRUE(fs::exists(dir / "run" / "record.json"));
  EXPECT_EQ(run_cli("verify-tail --replicates 0" + out), 1);
  EXPECT_EQ(run_cli("no-such-command"), 1);

  const fs::path bad = dir / "bad.json";
  std::ofstream(bad) << R"({"kind": "segment", "changepoint": {"d_max": 0}})";
  EXPECT_EQ(run_cli("segment --config " + bad.string() + out), 1);
  std::ofstream(dir / "broken.json") << "{not json";
  EXPECT_EQ(run_cli("segment --config " + (dir / "broken.json").string() + out), 1);
  EXPECT_EQ(run_cli("calibrate --config " + (dir / "missing.json").string() + out), 2);

  // A grid starting at 5 sigma^2/n cannot place the jump near 1.
  const fs::path cfg = dir / "cal.json";
  std::ofstream(cfg) << R"({"kind": "calibrate", "replicates": 1, "workers": 1,
                            "grid": {"lo": 5.0, "hi": 10.0, "points": 4}})";
  EXPECT_EQ(run_cli("calibrate --config " + cfg.string() + out), 0);
  EXPECT_EQ(run_cli("calibrate --assert --config " + cfg.string() + out), 3);
  EXPECT_EQ(run_cli("report " + (dir / "run").string() + " --out " + (dir / "r.csv").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "r.csv"));
}

TEST(Cli, SameSeedGivesByteIdenticalCsv) {
  const fs::path dir = scratch("cli_det");
  ASSERT_EQ(run_cli("segment --replicates 4 --seed 11 --out " + (dir / "a").string()), 0);
  ASSERT_EQ(run_cli("segment --replicates 4 --seed 11 --workers 2 --out " + (dir / "b").string()), 0);
  for (const char* f : {"replicates.csv", "path_replicate0.csv", "segmentation_replicate0.csv"})
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
}
