// Copyright 2026 The JA-GNN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "jagnn/cli.hpp"
#include "json.hpp"

namespace jagnn {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "jagnn");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::json small_config() {
  return {{"epochs", 1},  {"batch_size", 16}, {"max_batches_per_epoch", 3}, {"width", 8},
          {"heads", 1},   {"layers", 2},      {"epsilon", 0.5},             {"patience", 0}};
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("cli");
    testing::write_file(*dir_ / "scenario.json", nlohmann::json{{"n_anchors", 800}, {"fraud_rate", 0.05}}.dump());
    const CliRun r = cli({"generate", "--scenario", (*dir_ / "scenario.json").string(), "--out-dir",
                       (*dir_ / "graph").string(), "--seed", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static std::string path(const std::string& name) { return (*dir_ / name).string(); }
  static std::string graph() { return path("graph"); }

  static testing::TempDir* dir_;
};

testing::TempDir* CliTest::dir_ = nullptr;

TEST_F(CliTest, GenerateWritesGraphAndSettings) {
  for (const char* f : {"nodes.csv", "edges.csv", "labels.csv", "ground_truth.json", "resolved_config.json"}) {
    EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(graph()) / f)) << f;
  }
  const auto j = nlohmann::json::parse(slurp(std::filesystem::path(graph()) / "resolved_config.json"));
  EXPECT_EQ(j["command"], "generate");
  EXPECT_EQ(j["scenario"]["seed"], 1);
}

TEST_F(CliTest, ZeroModelScoresFifty) {
  nlohmann::json c = small_config();
  c["init"] = "zeros";
  c["learning_rate"] = 0.0;
  testing::write_file(path("zero.json"), c.dump());
  CliRun r = cli({"train", "--config", path("zero.json"), "--graph-dir", graph(), "--out", path("zero/model.ckpt")});
  ASSERT_EQ(r.code, 0) << r.err;
  r = cli({"score", "--checkpoint", path("zero/model.ckpt"), "--graph-dir", graph(), "--anchors", "0,5,17"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "node_id,score\n0,50\n5,50\n17,50\n");
}

TEST_F(CliTest, TrainedScoresStayInRange) {
  testing::write_file(path("small.json"), small_config().dump());
  CliRun r = cli({"train", "--config", path("small.json"), "--graph-dir", graph(), "--out", path("t/model.ckpt"),
               "--log", path("t/log.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto settings = nlohmann::json::parse(slurp(path("t/resolved_config.json")));
  EXPECT_EQ(settings["command"], "train");
  EXPECT_EQ(settings["config"]["width"], 8);
  EXPECT_EQ(nlohmann::json::parse(slurp(path("t/log.jsonl")))["epoch"], 1);

  std::string ids;
  for (int i = 0; i < 40; ++i) ids += (i ? "," : "") + std::to_string(i * 7);
  r = cli({"score", "--checkpoint", path("t/model.ckpt"), "--graph-dir", graph(), "--anchors", ids, "--out",
           path("t/scores.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(slurp(path("t/scores.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "node_id,score");
  int rows = 0;
  while (std::getline(csv, line)) {
    const double score = std::stod(line.substr(line.find(',') + 1));
    EXPECT_GE(score, 0.0);
    EXPECT_LE(score, 100.0);
    ++rows;
  }
  EXPECT_EQ(rows, 40);

  r = cli({"eval", "--checkpoint", path("t/model.ckpt"), "--graph-dir", graph(), "--split", "test", "--out",
           path("t/eval.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = nlohmann::json::parse(slurp(path("t/eval.json")));
  EXPECT_GE(report["auc"].get<double>(), 0.0);
  EXPECT_LE(report["auc"].get<double>(), 1.0);
}

TEST_F(CliTest, SweepDepthReportsEveryDepthReproducibly) {
  testing::write_file(path("sweep.json"), small_config().dump());
  std::string first;
  for (int run = 0; run < 2; ++run) {
    const CliRun r = cli({"sweep-depth", "--config", path("sweep.json"), "--graph-dir", graph(), "--out",
                       path("sweep/report.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string report = slurp(path("sweep/report.csv"));
    if (run == 0) first = report;
    EXPECT_EQ(report, first);
  }
  std::istringstream csv(first);
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "d,AUC,Recall");
  int d = 0;
  while (std::getline(csv, line)) EXPECT_EQ(line.substr(0, line.find(',')), std::to_string(d++));
  EXPECT_EQ(d, 3);
}

TEST_F(CliTest, ConfigFromEnvironment) {
  nlohmann::json c = small_config();
  c["width"] = 6;
  testing::write_file(path("env.json"), c.dump());
  setenv(kConfigEnvVar, path("env.json").c_str(), 1);
  const CliRun r = cli({"train", "--graph-dir", graph(), "--out", path("env/model.ckpt")});
  unsetenv(kConfigEnvVar);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(slurp(path("env/resolved_config.json")))["config"]["width"], 6);
}

TEST_F(CliTest, SampleWritesNeighborhood) {
  const CliRun r = cli({"sample", "--graph-dir", graph(), "--target", "3", "--epsilon", "1", "--out",
                     path("sample/s.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto s = nlohmann::json::parse(slurp(path("sample/s.json")));
  EXPECT_EQ(s["target"], 3);
  EXPECT_EQ(s["k_top"].size() + s["n_random"].size(), s["candidates"].size());
}

TEST_F(CliTest, ErrorsArePrefixed) {
  testing::write_file(path("bad.json"), R"({"epochz": 3})");
  CliRun r = cli({"train", "--config", path("bad.json"), "--graph-dir", graph(), "--out", path("bad/m.ckpt")});
  EXPECT_NE(r.code, 0);
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u) << r.err;
  EXPECT_NE(r.err.find("epochz"), std::string::npos);
  r = cli({"score", "--checkpoint", path("missing.ckpt"), "--graph-dir", graph(), "--anchors", "1"});
  EXPECT_NE(r.code, 0);
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u) << r.err;
  r = cli({"bogus"});
  EXPECT_NE(r.code, 0);
}

}  // namespace
}  // namespace jagnn
