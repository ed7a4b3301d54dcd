#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "coda/dataset.hpp"
#include "coda_cli/cli.hpp"

namespace coda {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "coda");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("coda_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, ValidateBundledData) {
  const Outcome o = run({"validate", "--scheme", "dupont4", "--sbp", "dupont4"});
  EXPECT_EQ(o.code, cli::kExitOk) << o.err;
}

TEST_F(Cli, InvalidGraphFails) {
  write_text_file(path("bad.graph"), "a: x1 / x3\nb: x3 / x4\nc: x1 / x4\n");
  const Outcome o = run({"transform", "--graph", path("bad.graph"), "--out", path("out")});
  EXPECT_EQ(o.code, cli::kExitValidation);
  EXPECT_EQ(o.err.rfind("error: validation: ", 0), 0u) << o.err;
  EXPECT_NE(o.err.find("cycle {x1,x3,x4}"), std::string::npos) << o.err;
  EXPECT_NE(o.err.find("{x2}"), std::string::npos) << o.err;
  EXPECT_EQ(std::count(o.err.begin(), o.err.end(), '\n'), 1);
}

TEST_F(Cli, UsageErrors) {
  const Outcome o = run({"cluster", "--no-such-flag"});
  EXPECT_EQ(o.code, cli::kExitValidation);
  EXPECT_EQ(o.err.rfind("error: usage: ", 0), 0u) << o.err;
  EXPECT_EQ(run({"centre", "--data", path("missing.csv")}).code, cli::kExitValidation);
}

TEST_F(Cli, ClusterIsDeterministic) {
  ASSERT_EQ(run({"cluster", "--k", "3", "--out", path("a")}).code, cli::kExitOk);
  ASSERT_EQ(run({"cluster", "--k", "3", "--parallel", "--out", path("b")}).code, cli::kExitOk);
  const std::string a = read_text_file(path("a/cluster_assignment.csv"));
  EXPECT_EQ(a, read_text_file(path("b/cluster_assignment.csv")));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 110);
  EXPECT_TRUE(fs::exists(path("a/cluster_sweep_silhouette.svg")));
}

TEST_F(Cli, SeedFromEnvironment) {
  ::setenv("CODA_LEDGER_SEED", "banana", 1);
  const Outcome bad = run({"cluster", "--k", "3", "--out", path("x")});
  ::setenv("CODA_LEDGER_SEED", "42", 1);
  const Outcome ok = run({"cluster", "--k", "3", "--out", path("y")});
  ::unsetenv("CODA_LEDGER_SEED");
  EXPECT_EQ(bad.code, cli::kExitValidation);
  EXPECT_NE(bad.err.find("CODA_LEDGER_SEED"), std::string::npos);
  EXPECT_EQ(ok.code, cli::kExitOk) << ok.err;
}

TEST_F(Cli, CentreAndRegress) {
  const Outcome c = run({"centre", "--scheme", "dupont4", "--group-by", "Brand", "--out", path("c")});
  ASSERT_EQ(c.code, cli::kExitOk) << c.err;
  const std::string centre = read_text_file(path("c/centre.csv"));
  EXPECT_NE(centre.find("0.2354"), std::string::npos);
  EXPECT_NE(centre.find("0.3907"), std::string::npos);

  write_text_file(path("dupont.graph"), "turnover: x1 / x4\nmargin: x1 / x2\nleverage: x3 / x4\n");
  const Outcome g = run({"regress", "--graph", path("dupont.graph"), "--predictors", "Age,Brand", "--out", path("r")});
  ASSERT_EQ(g.code, cli::kExitOk) << g.err;
  EXPECT_NE(g.out.find("turnover ~ Brand: estimate=-0.4068 p=0.0064 significant"), std::string::npos) << g.out;
  EXPECT_TRUE(fs::exists(path("r/regression_pairwise_detail.md")));
}

TEST_F(Cli, RecodeCategoricalPredictor) {
  std::string csv = "Firm,x1,x2,x3,Kind\n";
  for (int i = 0; i < 12; ++i) {
    csv += "f" + std::to_string(i) + "," + std::to_string(10 + i) + "," + std::to_string(5 + (i * 7) % 11) + "," +
           std::to_string(3 + (i * 5) % 13) + "," + (i % 3 == 0 ? "own" : "licensed") + "\n";
  }
  write_text_file(path("k.csv"), csv);
  write_text_file(path("balance.sbp"), "+ + -\n+ - 0\n");
  const std::vector<std::string> base{"regress", "--data", path("k.csv"), "--sbp", path("balance.sbp"),
                                      "--responses", "ilr", "--predictors", "Kind", "--out", path("k")};
  const Outcome raw = run(base);
  EXPECT_EQ(raw.code, cli::kExitValidation);
  EXPECT_NE(raw.err.find("categorical"), std::string::npos) << raw.err;
  std::vector<std::string> recoded = base;
  recoded.push_back("--recode");
  recoded.push_back("Kind=own");
  const Outcome ok = run(recoded);
  EXPECT_EQ(ok.code, cli::kExitOk) << ok.err;
  EXPECT_NE(ok.out.find("~ Kind"), std::string::npos);
}

TEST_F(Cli, ZerosReplace) {
  write_text_file(path("z.csv"), "Firm,x1,x2\na,0,2\nb,0,2\nc,5,1\nd,6,3\ne,7,1\nf,8,2\n");
  const Outcome flagged = run({"zeros", "--data", path("z.csv"), "--replace", "--out", path("z")});
  EXPECT_EQ(flagged.code, cli::kExitValidation);
  const Outcome ok = run({"zeros", "--data", path("z.csv"), "--replace", "--allow-flagged-zeros", "--out", path("z")});
  ASSERT_EQ(ok.code, cli::kExitOk) << ok.err;
}

}  // namespace
}  // namespace coda
