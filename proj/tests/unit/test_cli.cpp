// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "robotid/cli/commands.hpp"
#include "robotid/core/sequence_io.hpp"
#include "robotid/net/checkpoint.hpp"

namespace fs = std::filesystem;
using namespace robotid;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("robotid_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& rel) const { return (dir_ / rel).string(); }

  // Small dataset plus a tiny trained model.
  void prepare(bool with_model = true) {
    ASSERT_EQ(run({"simulate", "--sequences", "3", "--frames", "120", "--seed", "4", "--out", path("data")}).code, 0);
    ASSERT_EQ(run({"simulate", "--sequences", "2", "--frames", "300", "--seed", "5", "--out", path("test")}).code, 0);
    if (!with_model) return;
    ASSERT_EQ(run({"train", "--manifest", path("data/manifest.txt"), "--hidden", "6", "--layers", "1",
                   "--epochs", "1", "--bptt", "40", "--chunk", "60", "--out", path("model")})
                  .code,
              0);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SimulateWritesDatasetAndResolvedConfig) {
  const auto r = run({"simulate", "--n", "3", "--m", "5", "--sequences", "4", "--frames", "50",
                      "--seed", "9", "--out", path("sim")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto entries = core::read_manifest(path("sim/manifest.txt"));
  ASSERT_EQ(entries.size(), 4u);
  const auto seq = core::read_sequence(entries[0]);
  EXPECT_EQ(seq.meta.n_robots, 3);
  EXPECT_EQ(seq.meta.n_slots, 5);
  EXPECT_EQ(seq.frames.size(), 50u);
  const std::string toml = slurp(path("sim/simulate.toml"));
  EXPECT_NE(toml.find("n=3"), std::string::npos) << toml;
  EXPECT_NE(toml.find("frames=50"), std::string::npos) << toml;
}

TEST_F(CliTest, ConfigFileReproducesRun) {
  ASSERT_EQ(run({"simulate", "--sequences", "2", "--frames", "40", "--seed", "11", "--sigma-x", "0.4",
                 "--out", path("a")})
                .code,
            0);
  const auto r = run({"simulate", "--config", path("a/simulate.toml"), "--out", path("b")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto a = core::read_manifest(path("a/manifest.txt"));
  const auto b = core::read_manifest(path("b/manifest.txt"));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(slurp(a[i]), slurp(b[i]));
  EXPECT_EQ(core::read_sequence(b[0]).meta.sigma_x, 0.4);

  // Same for a command with list-valued and optional keys.
  ASSERT_EQ(run({"eval", "--manifest", path("a/manifest.txt"), "--methods", "kalman-ha,jpda", "--gate-jpda", "12",
                 "--out", path("e1")})
                .code,
            0);
  const auto r2 = run({"eval", "--config", path("e1/eval.toml"), "--out", path("e2")});
  ASSERT_EQ(r2.code, 0) << r2.err;
  EXPECT_EQ(slurp(path("e1/report.json")), slurp(path("e2/report.json")));
  EXPECT_NE(slurp(path("e2/eval.toml")).find("gate-jpda=12"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"simulate", "--no-such-flag", "1"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"simulate", "--n", "two"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, InvalidInputsExitOne) {
  EXPECT_EQ(run({"train", "--out", path("x")}).code, cli::kExitInvalid);
  EXPECT_EQ(run({"simulate", "--n", "4", "--m", "3", "--out", path("x")}).code, cli::kExitInvalid);
  EXPECT_EQ(run({"eval", "--manifest", path("missing.txt"), "--out", path("x")}).code, cli::kExitInvalid);
  prepare(false);
  const auto r = run({"eval", "--manifest", path("test/manifest.txt"), "--methods", "net", "--out", path("x")});
  EXPECT_EQ(r.code, cli::kExitInvalid);
  EXPECT_NE(r.err.find("checkpoint"), std::string::npos);
  EXPECT_EQ(run({"eval", "--manifest", path("test/manifest.txt"), "--methods", "net", "--checkpoint",
                 path("none.ckpt"), "--out", path("x")})
                .code,
            cli::kExitInvalid);
}

TEST_F(CliTest, EvalDispatchesEveryMethod) {
  prepare();
  const auto r = run({"eval", "--manifest", path("test/manifest.txt"), "--methods",
                      "kalman-ha,kalman-ha2,jpda,net", "--checkpoint", path("model/model.ckpt"),
                      "--out", path("eval")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = nlohmann::json::parse(slurp(path("eval/report.json")));
  ASSERT_EQ(report.at("methods").size(), 4u);
  EXPECT_EQ(report.at("methods")[0].at("method"), "kalman-ha");
  EXPECT_EQ(report.at("methods")[3].at("method"), "net");
  EXPECT_TRUE(fs::exists(path("eval/report.csv")));
  EXPECT_TRUE(fs::exists(path("eval/timing.json")));

  const auto empty = run({"eval", "--manifest", path("test/manifest.txt"), "--methods", "", "--out", path("empty")});
  EXPECT_EQ(empty.code, 0) << empty.err;
  EXPECT_TRUE(nlohmann::json::parse(slurp(path("empty/report.json"))).at("methods").empty());
}

TEST_F(CliTest, ThresholdViolationExitsThree) {
  prepare();
  const auto r = run({"eval", "--manifest", path("test/manifest.txt"), "--methods", "kalman-ha,net",
                      "--checkpoint", path("model/model.ckpt"), "--min-net-success", "0.999",
                      "--out", path("eval")});
  EXPECT_EQ(r.code, cli::kExitThreshold);
  EXPECT_TRUE(fs::exists(path("eval/report.json")));
}

TEST_F(CliTest, TrainAndEvalAreReproducible) {
  prepare();
  ASSERT_EQ(run({"train", "--manifest", path("data/manifest.txt"), "--hidden", "6", "--layers", "1",
                 "--epochs", "1", "--bptt", "40", "--chunk", "60", "--out", path("model2")})
                .code,
            0);
  EXPECT_EQ(slurp(path("model/model.ckpt")), slurp(path("model2/model.ckpt")));
  EXPECT_EQ(slurp(path("model/train_log.csv")), slurp(path("model2/train_log.csv")));
  for (const char* out : {"e1", "e2"}) {
    ASSERT_EQ(run({"eval", "--manifest", path("test/manifest.txt"), "--methods", "kalman-ha2,net",
                   "--checkpoint", path("model/model.ckpt"), "--out", path(out)})
                  .code,
              0);
  }
  EXPECT_EQ(slurp(path("e1/report.csv")), slurp(path("e2/report.csv")));
  auto a = nlohmann::json::parse(slurp(path("e1/report.json")));
  auto b = nlohmann::json::parse(slurp(path("e2/report.json")));
  EXPECT_EQ(a.at("methods"), b.at("methods"));
}

TEST_F(CliTest, FineTuneStartsFromCheckpoint) {
  prepare();
  const auto r = run({"train", "--manifest", path("test/manifest.txt"), "--fine-tune",
                      path("model/model.ckpt"), "--epochs", "1", "--bptt", "40", "--chunk", "60",
                      "--checkpoint", path("tuned.ckpt"), "--out", path("tune")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto base = net::load_checkpoint(path("model/model.ckpt"));
  const auto tuned = net::load_checkpoint(path("tuned.ckpt"));
  EXPECT_EQ(tuned.arch(), base.arch());
  EXPECT_EQ(tuned.norm.mean, base.norm.mean);
  EXPECT_FALSE(tuned.weights == base.weights);

  ASSERT_EQ(run({"simulate", "--n", "3", "--m", "5", "--sequences", "1", "--frames", "50", "--out", path("big")}).code, 0);
  EXPECT_EQ(run({"train", "--manifest", path("big/manifest.txt"), "--fine-tune", path("model/model.ckpt"),
                 "--out", path("bad")})
                .code,
            cli::kExitInvalid);
}

TEST_F(CliTest, InferWritesPredictions) {
  prepare();
  const auto entries = core::read_manifest(path("test/manifest.txt"));
  const auto r = run({"infer", "--checkpoint", path("model/model.ckpt"), "--input", entries[0].string(),
                      "--out", path("inf")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(slurp(path("inf/predictions.csv")));
  std::string header;
  std::getline(csv, header);
  EXPECT_NE(header.find("slot0"), std::string::npos) << header;
  EXPECT_NE(header.find("robot1_x"), std::string::npos) << header;
  long rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, 300);
}

TEST_F(CliTest, ExperimentsRunFromTheCommandLine) {
  prepare();
  auto r = run({"swap-test", "--manifest", path("test/manifest.txt"), "--checkpoint", path("model/model.ckpt"),
                "--trials", "4", "--window", "0", "--min-recovered", "1.0", "--out", path("swap")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto swap = nlohmann::json::parse(slurp(path("swap/swap.json")));
  EXPECT_EQ(swap.at("recovered_fraction"), 1.0);

  r = run({"shuffle-test", "--manifest", path("test/manifest.txt"), "--checkpoint", path("model/model.ckpt"),
           "--min-gap", "0.9", "--out", path("shuffle")});
  EXPECT_EQ(r.code, cli::kExitThreshold);
  const auto sh = nlohmann::json::parse(slurp(path("shuffle/shuffle.json")));
  EXPECT_TRUE(sh.contains("ordered"));
  EXPECT_TRUE(sh.contains("shuffled"));
}

TEST_F(CliTest, OutDirectoryFromEnvironment) {
  ::setenv("ROBOTID_OUT", path("env").c_str(), 1);
  const auto r = run({"simulate", "--sequences", "1", "--frames", "5"});
  ::unsetenv("ROBOTID_OUT");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(path("env/manifest.txt")));
}
