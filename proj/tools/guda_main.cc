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

// guda: demonstration generation, augmentation, training, evaluation and
// reporting for guided trajectory augmentation experiments.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "guda/error.h"
#include "guda/pipeline.h"

namespace {

struct GlobalFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string strategy;
};

guda::RunConfig ResolveConfig(const GlobalFlags& flags) {
  guda::RunConfig config =
      flags.config_path.empty() ? guda::RunConfig{} : guda::LoadRunConfig(flags.config_path);
  if (flags.seed) config.seeds = {*flags.seed};
  if (!flags.out.empty()) config.out_dir = flags.out;
  if (!flags.strategy.empty()) {
    guda::CheckStrategy(flags.strategy);
    config.strategies = {flags.strategy};
  }
  config.Validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guided data augmentation for offline learning from demonstration"};
  app.require_subcommand(1);
  GlobalFlags flags;
  app.add_option("--config", flags.config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", flags.seed, "Run a single seed instead of the configured list");
  app.add_option("--out", flags.out, "Output directory");
  app.add_option("--strategy", flags.strategy, "guda, random or none")
      ->check(CLI::IsMember({"guda", "random", "none"}));

  // Per-command overrides of config fields.
  std::optional<std::string> task;
  std::optional<int> episodes;
  std::optional<double> noise;
  std::optional<std::size_t> n;
  std::optional<int> steps;
  std::optional<int> eval_episodes;
  std::optional<std::string> anchors;
  std::vector<std::size_t> counts;
  std::vector<int> sizes;
  std::string audit_file;
  std::vector<std::string> anchor_tasks;

  auto* demo = app.add_subcommand("demo", "Generate scripted demonstrations");
  demo->add_option("--task", task, "Registered task name");
  demo->add_option("--episodes", episodes, "Number of demonstration episodes");
  demo->add_option("--noise", noise, "Demonstrator noise level in [0, 1]");

  auto* augment = app.add_subcommand("augment", "Build augmented datasets");
  augment->add_option("--n", n, "Target augmented transitions");

  auto* train = app.add_subcommand("train", "Train behavior-cloning policies");
  train->add_option("--steps", steps, "Gradient steps");

  auto* eval = app.add_subcommand("eval", "Evaluate trained policies");
  eval->add_option("--episodes", eval_episodes, "Evaluation episodes");

  auto* report = app.add_subcommand("report", "Aggregate results into report.csv");

  auto* sweep_aug = app.add_subcommand("sweep-aug", "Sweep the augmentation count");
  sweep_aug->add_option("--counts", counts, "Augmentation counts")->delimiter(',');

  auto* sweep_demo = app.add_subcommand("sweep-demo", "Sweep the demonstration count");
  sweep_demo->add_option("--sizes", sizes, "Demonstration episode counts")->delimiter(',');

  auto* audit = app.add_subcommand("audit", "Re-check every invariant of a dataset file");
  audit->add_option("file", audit_file, "Dataset JSONL")->required();

  auto* anchor_cmd = app.add_subcommand("anchors", "Measure expert/random return anchors");
  anchor_cmd->add_option("--tasks", anchor_tasks, "Tasks (default: the config task)")
      ->delimiter(',');

  for (auto* sub : app.get_subcommands({})) {
    sub->add_option("--anchors", anchors, "Anchors JSON file");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(guda::ErrorKind::kConfig);
  }

  try {
    guda::RunConfig config = ResolveConfig(flags);
    if (task) config.task = *task;
    if (episodes) config.demo_episodes = *episodes;
    if (noise) config.demo_noise = *noise;
    if (n) config.n = *n;
    if (steps) config.train.gradient_steps = *steps;
    if (eval_episodes) config.eval_episodes = *eval_episodes;
    if (anchors) config.anchors_path = *anchors;
    if (!counts.empty()) config.sweep_counts = counts;
    if (!sizes.empty()) config.sweep_sizes = sizes;
    config.Validate();

    std::ostream& log = std::cout;
    auto for_each_cell = [&](auto&& stage) {
      for (const auto& strategy : config.strategies) {
        for (std::uint64_t seed : config.seeds) stage(config, strategy, seed, log);
      }
    };
    if (*demo) {
      guda::CmdDemo(config, log);
    } else if (*augment) {
      for_each_cell(guda::CmdAugment);
    } else if (*train) {
      for_each_cell(guda::CmdTrain);
    } else if (*eval) {
      for_each_cell(guda::CmdEval);
    } else if (*report) {
      guda::CmdReport(config, log);
    } else if (*sweep_aug) {
      guda::CmdSweepAug(config, log);
    } else if (*sweep_demo) {
      guda::CmdSweepDemo(config, log);
    } else if (*audit) {
      if (!guda::CmdAudit(config, audit_file, log).ok()) {
        return static_cast<int>(guda::ErrorKind::kData);
      }
    } else if (*anchor_cmd) {
      guda::CmdAnchors(config,
                       anchor_tasks.empty() ? std::vector<std::string>{config.task}
                                            : anchor_tasks,
                       log);
    }
  } catch (const guda::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(guda::ErrorKind::kData);
  }
  return 0;
}
