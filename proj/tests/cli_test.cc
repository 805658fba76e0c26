// Copyright 2026 The GuDA Authors
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

// Drives the guda executable end to end.

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

int RunCli(const std::string& args) {
  const std::string cmd = std::string(GUDA_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("guda_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string WriteConfig(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }

  // Runs the five file stages against `config`, writing into `out`.
  void Pipeline(const std::string& config, const fs::path& out) {
    const std::string base = "--config " + config + " --out " + out.string() + " ";
    for (const char* stage : {"demo", "augment", "train", "eval", "report"}) {
      ASSERT_EQ(RunCli(base + stage), 0) << stage;
    }
  }

  fs::path dir_;
};

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(RunCli("--help"), 0);
  EXPECT_EQ(RunCli(""), 2);
  EXPECT_EQ(RunCli("frobnicate"), 2);
  EXPECT_EQ(RunCli("--strategy mixup demo"), 2);
  EXPECT_EQ(RunCli("--config " + WriteConfig("bad.json", R"({"tsak": 1})") + " demo"), 2);
  EXPECT_EQ(RunCli("--out " + (dir_ / "empty").string() + " train"), 3);
  EXPECT_EQ(RunCli("--out " + (dir_ / "empty").string() + " report"), 3);
  EXPECT_EQ(RunCli("audit " + (dir_ / "nothing.jsonl").string()), 3);
  // Finite weights whose products overflow to inf - inf on any start state.
  const std::string config = WriteConfig("nan.json", R"({"train": {"gradient_steps": 10},
      "n": 200, "seeds": [0], "strategies": ["none"], "eval_episodes": 2})");
  const std::string base = "--config " + config + " --out " + (dir_ / "nan").string() + " ";
  ASSERT_EQ(RunCli(base + "demo"), 0);
  ASSERT_EQ(RunCli(base + "augment"), 0);
  ASSERT_EQ(RunCli(base + "train"), 0);
  std::ofstream(dir_ / "nan" / "policy_none_s0.json")
      << R"({"format":"guda-policy","version":1,"sizes":[4,2],"action_low":[-1.0,-1.0],)"
      << R"("action_high":[1.0,1.0],"input_mean":[0.0,0.0,0.0,0.0],)"
      << R"("input_scale":[10.0,10.0,1.0,1.0],"layers":[{"w":[1.7e308,-1.7e308,0.0,0.0,)"
      << R"(1.7e308,-1.7e308,0.0,0.0],"b":[0.0,0.0]}]})";
  EXPECT_EQ(RunCli(base + "eval"), 4);
}

TEST_F(CliTest, SmokeRunIsFastAndReproducible) {
  const std::string config = WriteConfig("smoke.json", R"({
    "task": "maze-umaze", "seeds": [0, 1], "train": {"gradient_steps": 2000}})");
  const auto start = std::chrono::steady_clock::now();
  Pipeline(config, dir_ / "a");
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(seconds, 120.0);

  const std::string report = Slurp(dir_ / "a" / "report.csv");
  std::istringstream rows(report);
  std::string line;
  int n = 0;
  while (std::getline(rows, line)) ++n;
  EXPECT_EQ(n, 4);

  // Report again: identical outputs.
  ASSERT_EQ(RunCli("--config " + config + " --out " + (dir_ / "a").string() + " report"), 0);
  EXPECT_EQ(Slurp(dir_ / "a" / "report.csv"), report);

  Pipeline(config, dir_ / "b");
  for (const auto& entry : fs::directory_iterator(dir_ / "a")) {
    const auto other = dir_ / "b" / entry.path().filename();
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(Slurp(entry.path()), Slurp(other)) << entry.path().filename();
  }
  EXPECT_NE(Slurp(dir_ / "a" / "augmented_guda_s0.jsonl"),
            Slurp(dir_ / "a" / "augmented_random_s0.jsonl"));
  EXPECT_EQ(RunCli("audit " + (dir_ / "a" / "augmented_guda_s0.jsonl").string()), 0);
  EXPECT_EQ(RunCli("audit " + (dir_ / "a" / "augmented_random_s0.jsonl").string()), 0);
}

TEST_F(CliTest, DeletedIntermediatesAreReproduced) {
  const std::string config = WriteConfig("small.json", R"({
    "seeds": [5], "n": 3000, "strategies": ["guda"], "train": {"gradient_steps": 100},
    "eval_episodes": 10})");
  const std::string base = "--config " + config + " --out " + (dir_ / "o").string() + " ";
  for (const char* stage : {"demo", "augment", "train", "eval"}) ASSERT_EQ(RunCli(base + stage), 0);
  const auto policy = dir_ / "o" / "policy_guda_s5.json";
  const std::string before = Slurp(policy);
  fs::remove(policy);
  EXPECT_EQ(RunCli(base + "eval"), 3);
  ASSERT_EQ(RunCli(base + "train"), 0);
  EXPECT_EQ(Slurp(policy), before);
}

TEST_F(CliTest, CorruptedDatasetFailsAudit) {
  const std::string config = WriteConfig("small.json", R"({
    "seeds": [0], "n": 500, "strategies": ["random"]})");
  const std::string base = "--config " + config + " --out " + (dir_ / "o").string() + " ";
  ASSERT_EQ(RunCli(base + "demo"), 0);
  ASSERT_EQ(RunCli(base + "augment"), 0);
  const auto path = dir_ / "o" / "augmented_random_s0.jsonl";
  std::string text = Slurp(path);
  // Flip the first stored reward of the last episode.
  const auto pos = text.rfind("\"rewards\":[");
  ASSERT_NE(pos, std::string::npos);
  const auto digit = text.find_first_of("01", pos + 11);
  text[digit] = text[digit] == '0' ? '1' : '0';
  std::ofstream(path, std::ios::binary) << text;
  EXPECT_EQ(RunCli("--config " + config + " audit " + path.string()), 3);
}

}  // namespace
