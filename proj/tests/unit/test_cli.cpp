#include "tempora/manifest.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <sys/wait.h>

#ifdef TEMPORA_CLI_PATH

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status = -1;
  std::string output;
};

RunResult run(const std::string& args, const fs::path& dir) {
  const auto log = dir / "cli.log";
  const std::string cmd = std::string("'") + TEMPORA_CLI_PATH + "' " + args + " > '" + log.string() + "' 2>&1";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream s;
  s << in.rdbuf();
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, s.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = tempora::testing::temp_dir(::testing::UnitTest::GetInstance()->current_test_info()->name()); }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, GenIsDeterministic) {
  for (const auto* sub : {"a", "b"}) {
    const auto r = run("gen --preset eta-table2 --n 781 --seed 1 --out '" + (dir_ / sub).string() + "'", dir_);
    ASSERT_EQ(r.status, 0) << r.output;
  }
  const auto name = "eta-table2__mean.jsonl";
  EXPECT_EQ(slurp(dir_ / "a" / name), slurp(dir_ / "b" / name));
  EXPECT_FALSE(slurp(dir_ / "a" / name).empty());
}

TEST_F(CliTest, UnknownPresetIsUsageError) {
  const auto r = run("gen --preset nope --out '" + dir_.string() + "'", dir_);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("sar-table2"), std::string::npos) << r.output;
}

TEST_F(CliTest, RhoAndGammaTogetherIsUsageError) {
  ASSERT_EQ(run("gen --preset standard-table2 --n 20 --out '" + (dir_ / "t").string() + "'", dir_).status, 0);
  const auto r = run("evaluate --traces '" + (dir_ / "t" / "*.jsonl").string() + "' --rho 0.5 --gamma-ms 80 --out '" +
                         (dir_ / "o").string() + "'",
                     dir_);
  EXPECT_EQ(r.status, 2) << r.output;
}

TEST_F(CliTest, BadTraceIsPartialFailure) {
  ASSERT_EQ(run("gen --preset standard-table2 --n 20 --out '" + (dir_ / "t").string() + "'", dir_).status, 0);
  std::ofstream(dir_ / "t" / "broken.jsonl") << "{\"method\":\"X\"}\n";
  const auto r = run("evaluate --traces '" + (dir_ / "t" / "*.jsonl").string() + "' --rho 1 --out '" +
                         (dir_ / "o").string() + "'",
                     dir_);
  EXPECT_EQ(r.status, 1) << r.output;
  EXPECT_TRUE(fs::exists(dir_ / "o" / "matrix.csv"));
}

TEST_F(CliTest, SingleScenarioMatrix) {
  ASSERT_EQ(run("gen --preset standard-table2 --n 50 --out '" + (dir_ / "t").string() + "'", dir_).status, 0);
  const auto r = run("evaluate --traces '" + (dir_ / "t" / "*.jsonl").string() + "' --rho 1 --out '" +
                         (dir_ / "o").string() + "'",
                     dir_);
  ASSERT_EQ(r.status, 0) << r.output;
  const auto matrix = slurp(dir_ / "o" / "matrix.csv");
  EXPECT_NE(matrix.find("Standard,discrete,rho=1,mean,"), std::string::npos) << matrix;
  const auto m = tempora::read_manifest(dir_ / "o" / "manifest.json");
  EXPECT_TRUE(tempora::verify_manifest(m, dir_ / "o").empty());
}

TEST_F(CliTest, ConfigFileSuppliesFlags) {
  ASSERT_EQ(run("gen --preset standard-table2 --n 50 --out '" + (dir_ / "t").string() + "'", dir_).status, 0);
  std::ofstream(dir_ / "run.conf") << "# sweep\nthreshold_ms = 100,200\n";
  const auto r = run("evaluate --config '" + (dir_ / "run.conf").string() + "' --traces '" +
                         (dir_ / "t" / "*.jsonl").string() + "' --out '" + (dir_ / "o").string() + "'",
                     dir_);
  ASSERT_EQ(r.status, 0) << r.output;
  const auto matrix = slurp(dir_ / "o" / "matrix.csv");
  EXPECT_NE(matrix.find("continuous,T_ms=200"), std::string::npos) << matrix;
  EXPECT_EQ(matrix.find("discrete"), std::string::npos);
}

TEST_F(CliTest, AnalyzeSingleMethodAndInsolvency) {
  ASSERT_EQ(run("gen --preset standard-table2,sar-table2 --n 100 --out '" + (dir_ / "t").string() + "'", dir_).status,
            0);
  ASSERT_EQ(run("evaluate --traces '" + (dir_ / "t" / "*.jsonl").string() +
                    "' --rho 1,0.25 --threshold-ms 50 --frozen-accuracy 0.001 --out '" + (dir_ / "o").string() + "'",
                dir_)
                .status,
            0);
  const auto r = run("analyze --in '" + (dir_ / "o").string() + "'", dir_);
  ASSERT_EQ(r.status, 0) << r.output;
  for (const auto* f : {"winners.csv", "winners.md", "spearman.csv", "win_stats.csv", "insolvency.csv"})
    EXPECT_TRUE(fs::exists(dir_ / "o" / f)) << f;
  const auto insolvency = slurp(dir_ / "o" / "insolvency.csv");
  EXPECT_EQ(insolvency.rfind("protocol,parameter,method,factor,competitor,competitor_utility,required_accuracy,insolvent", 0),
            0u);
  EXPECT_NE(insolvency.find("SAR"), std::string::npos);
}

TEST_F(CliTest, ExternalProviderMatchesReplay) {
  ASSERT_EQ(run("gen --preset eta-table2 --n 781 --frozen-budget-s 1,4 --out '" + (dir_ / "t").string() + "'", dir_)
                .status,
            0);
  const std::string traces = "--traces '" + (dir_ / "t" / "*.jsonl").string() + "' --frozen '" +
                             (dir_ / "t" / "frozen" / "*.jsonl").string() + "' --budget-s 1,4 --rho 0.5 --threshold-ms 100";
  ASSERT_EQ(run("evaluate " + traces + " --out '" + (dir_ / "replay").string() + "'", dir_).status, 0);
  const std::string provider = std::string("--provider-cmd \"'") + TEMPORA_ECHO_HARNESS_PATH +
                               "' --trace {trace} --frozen '" + (dir_ / "t" / "frozen" / "*.jsonl").string() + "'\"";
  const auto r = run("evaluate " + traces + " " + provider + " --out '" + (dir_ / "live").string() + "'", dir_);
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_EQ(slurp(dir_ / "replay" / "matrix.csv"), slurp(dir_ / "live" / "matrix.csv"));
}

#endif
