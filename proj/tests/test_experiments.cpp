#include "risline/config.hpp"
#include "risline/experiments.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace risline;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("risline_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kSmallScaling = R"(
[sweep]
sizes = 9
methods = CONTINUOUS, FULL_L4, FULL_L2, LINE_L4, LINE_L2, LINE_L2_EXACT, LINE_L2_STDQUAD
seeds = 1, 2

[solvers]
FULL_L2 = exhaustive
FULL_L4 = exhaustive
LINE_L2 = exhaustive
LINE_L4 = exhaustive
LINE_L2_STDQUAD = exhaustive

[second_step]
LINE_L2 = exhaustive
LINE_L4 = exhaustive

[run]
tuning_budget = 5
)";

std::map<std::string, double> objectives_by_method(const RunOutput& out, std::uint64_t seed) {
  std::map<std::string, double> m;
  for (const auto& r : out.rows) {
    if (r.seed == seed) m[r.method] = r.objective;
  }
  return m;
}

}  // namespace

TEST(Config, DefaultsAndLists) {
  const ExperimentConfig c = parse_config("[sweep]\nsizes = 16, 64\nmethods = LINE_L2, CONTINUOUS\n");
  EXPECT_EQ(c.sizes, (std::vector<int>{16, 64}));
  EXPECT_EQ(c.methods, (std::vector<Method>{Method::LineL2, Method::Continuous}));
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{1}));
  EXPECT_EQ(c.scene.ris_rows, 74);
  EXPECT_DOUBLE_EQ(c.scene.frequency_hz, 28e9);
}

TEST(Config, CommentsAreIgnored) {
  const ExperimentConfig c = parse_config("# hash comment\n; semicolon comment\n[run]\ntuning_budget = 7\n");
  EXPECT_EQ(c.tuning_budget, 7u);
}

TEST(Config, RejectsUnknownKeysAndSections) {
  EXPECT_THROW(parse_config("[sweep]\nsize = 16\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("[sweeps]\nsizes = 16\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("[sweep]\nmethods = LINE_L3\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("[run]\nvariable_accounting = other\n"), std::invalid_argument);
}

TEST(Config, SolverOverrides) {
  const ExperimentConfig c = parse_config("[solvers]\nFULL_L2 = sa:sweeps=10\n[second_step]\nLINE_L4 = alternating:starts=3\n");
  EXPECT_EQ(c.solver_for(Method::FullL2).str(), "sa:sweeps=10");
  EXPECT_EQ(c.second_step_for(Method::LineL4).engine, "alternating");
}

TEST(Config, RandomizedSceneIsSeedDependent) {
  const ExperimentConfig c = parse_config("[scene]\nrandomize_ut = true\n");
  const ScenarioConfig a = scene_for_seed(c, 1), b = scene_for_seed(c, 2), a2 = scene_for_seed(c, 1);
  EXPECT_NE(a.ut_angle_deg, b.ut_angle_deg);
  EXPECT_EQ(a.ut_angle_deg, a2.ut_angle_deg);
  EXPECT_GE(a.ut_angle_deg, -60.0);
  EXPECT_LE(a.ut_angle_deg, 60.0);
}

TEST(Sweeps, EmptyListsAreErrors) {
  EXPECT_THROW(run_scaling_sweep(parse_config("[sweep]\nsizes = 4\n"), {}), std::invalid_argument);
  EXPECT_THROW(run_scaling_sweep(parse_config("[sweep]\nmethods = FULL_L2\n"), {}), std::invalid_argument);
  EXPECT_THROW(run_distance_sweep(parse_config("[sweep]\nmethods = FULL_L2\n"), {}), std::invalid_argument);
  EXPECT_THROW(run_quadratization_comparison(parse_config("[sweep]\nmethods = LINE_L2\n"), {}),
               std::invalid_argument);
}

TEST(Sweeps, NonSquareSizeNeedsMatchingArray) {
  EXPECT_THROW(run_scaling_sweep(parse_config("[sweep]\nsizes = 10\nmethods = FULL_L2\n"), {}),
               std::invalid_argument);
  const RunOutput out = run_scaling_sweep(
      parse_config("[ris_array]\nrows = 2\ncols = 5\n[sweep]\nsizes = 10\nmethods = FULL_L2\n"), {});
  ASSERT_EQ(out.rows.size(), 1u);
  EXPECT_EQ(out.rows[0].rows, 2);
  EXPECT_EQ(out.rows[0].cols, 5);
}

TEST(Sweeps, ExhaustiveCapNeedsExtendedFlag) {
  const ExperimentConfig c = parse_config("[sweep]\nline_variables = 22\nmethods = LINE_L2_EXACT\n");
  EXPECT_THROW(run_quadratization_comparison(c, {}), std::invalid_argument);
  const ExperimentConfig big = parse_config("[sweep]\nline_variables = 28\nmethods = LINE_L2_EXACT\n");
  RunOptions o;
  o.extended = true;
  EXPECT_THROW(run_quadratization_comparison(big, o), std::invalid_argument);
}

TEST(Sweeps, VariableCountsForSmallArray) {
  const RunOutput out = run_scaling_sweep(
      parse_config("[sweep]\nsizes = 16\nmethods = FULL_L2, FULL_L4, LINE_L2, LINE_L4, LINE_L2_STDQUAD, "
                   "LINE_L2_EXACT\n[solvers]\nLINE_L2_STDQUAD = sa+greedy:sweeps=50\n[run]\ntuning_budget = 3\n"),
      {});
  std::map<std::string, std::size_t> counts;
  for (const auto& r : out.rows) counts[r.method] = r.variable_count;
  EXPECT_EQ(counts.at("FULL_L2"), 16u);
  EXPECT_EQ(counts.at("FULL_L4"), 32u);
  EXPECT_EQ(counts.at("LINE_L2"), 16u);
  EXPECT_EQ(counts.at("LINE_L4"), 32u);
  EXPECT_EQ(counts.at("LINE_L2_STDQUAD"), 40u);
  EXPECT_EQ(counts.at("LINE_L2_EXACT"), 8u);
}

TEST(Sweeps, FeasibleSetOrderingWithExactSolvers) {
  const RunOutput out = run_scaling_sweep(parse_config(kSmallScaling), {});
  ASSERT_EQ(out.rows.size(), 14u);
  for (std::uint64_t seed : {1u, 2u}) {
    auto o = objectives_by_method(out, seed);
    const double tol = 1e-9 * o.at("CONTINUOUS");
    EXPECT_GE(o.at("CONTINUOUS"), o.at("FULL_L4") - tol);
    EXPECT_GE(o.at("FULL_L4"), o.at("FULL_L2") - tol);
    EXPECT_GE(o.at("FULL_L4"), o.at("LINE_L4") - tol);
    EXPECT_GE(o.at("FULL_L2"), o.at("LINE_L2_EXACT") - tol);
    EXPECT_GE(o.at("LINE_L2_EXACT"), o.at("LINE_L2") - tol);
    EXPECT_GE(o.at("LINE_L2_EXACT"), o.at("LINE_L2_STDQUAD") - tol);
  }
}

TEST(Sweeps, TunedPenaltyReachesLineOptimum) {
  std::string cfg = kSmallScaling;
  cfg.replace(cfg.find("tuning_budget = 5"), 17, "tuning_budget = 40");
  cfg.replace(cfg.find("methods = "), cfg.find('\n', cfg.find("methods = ")) - cfg.find("methods = "),
              "methods = LINE_L2_EXACT, LINE_L2_STDQUAD");
  const RunOutput out = run_scaling_sweep(parse_config(cfg), {});
  for (std::uint64_t seed : {1u, 2u}) {
    auto o = objectives_by_method(out, seed);
    EXPECT_NEAR(o.at("LINE_L2_STDQUAD"), o.at("LINE_L2_EXACT"), 1e-9 * o.at("LINE_L2_EXACT"));
  }
}

TEST(Sweeps, RowsCarryConsistentUnits) {
  const RunOutput out = run_scaling_sweep(parse_config(kSmallScaling), {});
  for (const auto& r : out.rows) {
    EXPECT_EQ(r.elements, r.rows * r.cols);
    EXPECT_NEAR(r.received_power_w, 1.0 * r.objective, 1e-12 * r.received_power_w);
    EXPECT_NEAR(r.received_power_dbm, 10.0 * std::log10(r.received_power_w) + 30.0, 1e-9);
    EXPECT_FALSE(r.wall_time_s.has_value());
  }
}

TEST(Sweeps, ContinuousGrowsWithSize) {
  const RunOutput out = run_scaling_sweep(parse_config("[sweep]\nsizes = 4, 16, 64, 256\nmethods = CONTINUOUS\n"), {});
  ASSERT_EQ(out.rows.size(), 4u);
  for (std::size_t k = 1; k < out.rows.size(); ++k) EXPECT_GT(out.rows[k].objective, out.rows[k - 1].objective);
}

TEST(Sweeps, SeedOverrideReplacesList) {
  RunOptions o;
  o.seed = 42;
  const RunOutput out =
      run_scaling_sweep(parse_config("[sweep]\nsizes = 4\nmethods = FULL_L2\nseeds = 1, 2, 3\n"), o);
  ASSERT_EQ(out.rows.size(), 1u);
  EXPECT_EQ(out.rows[0].seed, 42u);
}

TEST(Sweeps, DistanceRowsOrderedAndRematched) {
  const RunOutput out = run_distance_sweep(
      parse_config("[ris_array]\nrows = 4\ncols = 4\n[sweep]\ndistances_m = 30, 10, 20\nmethods = CONTINUOUS, "
                   "LINE_L2\n"),
      {});
  ASSERT_EQ(out.rows.size(), 6u);
  EXPECT_EQ(out.rows[0].distance_m, 30.0);
  EXPECT_EQ(out.rows[0].method, "CONTINUOUS");
  EXPECT_EQ(out.rows[1].method, "LINE_L2");
  EXPECT_EQ(out.rows[5].distance_m, 20.0);
  for (const auto& r : out.rows) EXPECT_NEAR(r.received_power_w, r.objective, 1e-12 * r.objective);
}

TEST(Csv, HeaderAndNaWallTime) {
  ResultRow r;
  r.method = "FULL_L2";
  r.rows = r.cols = 2;
  r.elements = 4;
  r.levels = 2;
  r.received_power_w = 1e-3;
  r.received_power_dbm = watts_to_dbm(1e-3);
  std::ostringstream s;
  write_csv(s, {r});
  const std::string text = s.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), kCsvHeader);
  EXPECT_EQ(text.substr(text.size() - 3), "NA\n");
  r.wall_time_s = 0.5;
  std::ostringstream t;
  write_csv(t, {r});
  EXPECT_EQ(t.str().substr(t.str().size() - 10), ",0.500000\n");
}

TEST(Csv, DbmConversion) {
  EXPECT_DOUBLE_EQ(watts_to_dbm(1.0), 30.0);
  EXPECT_DOUBLE_EQ(watts_to_dbm(1e-3), 0.0);
  EXPECT_NEAR(watts_to_dbm(2.0), 33.0103, 1e-4);
}

TEST(Csv, ComparableBlanksTimingColumn) {
  const std::string csv = std::string(kCsvHeader) + "\na,1,2\nb,3,4\n";
  EXPECT_EQ(comparable_csv(csv, false), csv);
  EXPECT_EQ(comparable_csv(csv, true), std::string(kCsvHeader) + "\na,1,\nb,3,\n");
}

TEST(Commands, NamesRoundTrip) {
  for (Command c : {Command::QuadCmp, Command::Scaling, Command::Distance}) EXPECT_EQ(parse_command(to_string(c)), c);
  EXPECT_THROW(parse_command("sweep"), std::invalid_argument);
}

TEST(Manifest, TextRoundTrip) {
  Manifest m;
  m.command = Command::Distance;
  m.options.seed = 5;
  m.options.timing = true;
  m.config_text = "[sweep]\nmethods = FULL_L2\n";
  m.config_sha256 = sha256_hex(m.config_text);
  m.csv_sha256 = sha256_hex("x");
  m.row_count = 1;
  m.row_solvers = {"FULL_L2 N=4 seed=5 solver=exhaustive"};
  const fs::path dir = scratch("roundtrip");
  write_manifest(dir / "m.txt", m);
  const Manifest back = read_manifest(dir / "m.txt");
  EXPECT_EQ(back.command, m.command);
  EXPECT_EQ(back.options.seed, m.options.seed);
  EXPECT_EQ(back.options.timing, true);
  EXPECT_EQ(back.options.extended, false);
  EXPECT_EQ(back.config_text, m.config_text);
  EXPECT_EQ(back.config_sha256, m.config_sha256);
  EXPECT_EQ(back.row_solvers, m.row_solvers);
  fs::remove_all(dir);
}

TEST(Manifest, KnownDigest) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Manifest, ReplayIsByteIdentical) {
  const fs::path dir = scratch("replay");
  const std::string cfg = "[sweep]\nsizes = 4, 9\nmethods = FULL_L2, LINE_L4, CONTINUOUS\nseeds = 1, 2\n";
  execute_run(Command::Scaling, cfg, {}, dir / "run");
  const VerifyReport rep = verify_manifest(dir / "run" / "manifest.txt", dir / "replay");
  EXPECT_TRUE(rep.ok) << rep.message;
  EXPECT_EQ(slurp(dir / "run" / "results.csv"), slurp(dir / "replay" / "results.csv"));
  fs::remove_all(dir);
}

TEST(Manifest, TimingRunsCompareWithoutWallTime) {
  const fs::path dir = scratch("timing");
  RunOptions o;
  o.timing = true;
  execute_run(Command::Scaling, "[sweep]\nsizes = 4\nmethods = FULL_L2, CONTINUOUS\n", o, dir / "run");
  const VerifyReport rep = verify_manifest(dir / "run" / "manifest.txt", dir / "replay");
  EXPECT_TRUE(rep.ok) << rep.message;
  fs::remove_all(dir);
}

TEST(Manifest, EmptyRunIsRejected) {
  const fs::path dir = scratch("empty");
  EXPECT_THROW(execute_run(Command::Scaling, "[sweep]\nsizes = 4\n", {}, dir / "run"), std::invalid_argument);
  fs::remove_all(dir);
}

TEST(Manifest, TamperedConfigIsDetected) {
  const fs::path dir = scratch("tamper");
  execute_run(Command::Scaling, "[sweep]\nsizes = 4\nmethods = FULL_L2\n", {}, dir / "run");
  const fs::path mpath = dir / "run" / "manifest.txt";
  std::string text = slurp(mpath);
  text.replace(text.find("sizes = 4"), 9, "sizes = 9");
  std::ofstream(mpath, std::ios::binary) << text;
  const VerifyReport rep = verify_manifest(mpath, dir / "replay");
  EXPECT_FALSE(rep.ok);
  EXPECT_NE(rep.message.find("config hash mismatch"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Manifest, TamperedResultsAreDetected) {
  const fs::path dir = scratch("tamper_csv");
  execute_run(Command::Scaling, "[sweep]\nsizes = 4\nmethods = FULL_L2\n", {}, dir / "run");
  const fs::path mpath = dir / "run" / "manifest.txt";
  Manifest m = read_manifest(mpath);
  m.csv_sha256 = sha256_hex("not the csv");
  write_manifest(mpath, m);
  EXPECT_FALSE(verify_manifest(mpath, dir / "replay").ok);
  fs::remove_all(dir);
}
