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

#ifndef GUDA_PIPELINE_H_
#define GUDA_PIPELINE_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "guda/core_data.h"
#include "guda/env.h"
#include "guda/env_registry.h"
#include "guda/evaluation.h"
#include "guda/learner.h"
#include "guda/sampling.h"

namespace guda {

// Everything one experiment needs. Loaded from a JSON file; every field has
// a default.
struct RunConfig {
  std::string task = "maze-umaze";
  EnvOptions env;
  std::vector<std::string> strategies = {"guda", "random", "none"};
  // Target augmented transitions per dataset.
  std::size_t n = 50000;
  // Window length override; unset keeps the task default.
  std::optional<std::size_t> k;
  // Named AugmentationRule overrides: angular_sigma, positional_sigma,
  // truncation, max_retries, min_clearance, align_threshold,
  // rotation_trials, reflect_probability.
  std::map<std::string, double> rule_overrides;
  int demo_episodes = 5;
  double demo_noise = 0.5;
  std::uint64_t demo_seed = 0;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  TrainConfig train;
  int eval_episodes = 100;
  std::string out_dir = "out";
  std::string anchors_path = std::string(GUDA_DATA_DIR) + "/anchors.json";
  int workers = 1;
  std::vector<std::size_t> sweep_counts = {1000, 5000, 20000, 50000};
  std::vector<int> sweep_sizes = {1, 5, 10};
  int bootstrap_resamples = 2000;

  // Throws ConfigError for an unknown task, empty seeds or bad budgets.
  void Validate() const;
};

// Unknown keys are a ConfigError.
RunConfig ParseRunConfig(const std::string& json_text);
RunConfig LoadRunConfig(const std::string& path);

// Augmentation rule for a strategy ("guda" or "random") after overrides.
AugmentationRule RuleFor(const RunConfig& config, const std::string& strategy);
void CheckStrategy(const std::string& strategy);

// Demonstrations plus n augmented transitions (none for "none").
Dataset AugmentFor(const RunConfig& config, const Env& env, const Dataset& demos,
                   const std::string& strategy, std::size_t n, std::uint64_t seed,
                   AugmentationStats* stats = nullptr);

// Eval episodes for a seed start from stream (seed, kEvalStream) children,
// so every strategy faces the same initial states.
inline constexpr std::uint64_t kEvalStream = 0xE7A1;
EvalResult EvaluatePolicy(const RunConfig& config, const Env& env, const Policy& policy,
                          const std::string& strategy, std::uint64_t seed);

// Augment, train and evaluate one (strategy, n, seed) cell in memory.
EvalResult RunCell(const RunConfig& config, const Env& env, const Dataset& demos,
                   const std::string& strategy, std::size_t n, std::uint64_t seed);

struct AuditReport {
  std::size_t episodes = 0;
  std::size_t transitions = 0;
  std::size_t reward_violations = 0;
  std::size_t terminal_violations = 0;
  std::size_t chain_violations = 0;
  std::size_t action_violations = 0;
  std::size_t invalid_episodes = 0;

  bool ok() const {
    return reward_violations == 0 && terminal_violations == 0 && chain_violations == 0 &&
           action_violations == 0 && invalid_episodes == 0;
  }
};

// Re-checks reward exactness, terminal flags, chaining, action bounds and
// validity of every episode.
AuditReport AuditDataset(const Env& env, const Dataset& dataset);

// File layout under the output directory.
std::string DemoPath(const RunConfig& config);
std::string AugmentedPath(const RunConfig& config, const std::string& strategy,
                          std::uint64_t seed);
std::string PolicyPath(const RunConfig& config, const std::string& strategy,
                       std::uint64_t seed);
std::string ResultsPath(const RunConfig& config, const std::string& strategy,
                        std::uint64_t seed);

// File-based stages. Each reads its upstream files and writes its own, and
// throws DataError naming the missing stage when an input is absent.
void CmdDemo(const RunConfig& config, std::ostream& log);
void CmdAugment(const RunConfig& config, const std::string& strategy, std::uint64_t seed,
                std::ostream& log);
void CmdTrain(const RunConfig& config, const std::string& strategy, std::uint64_t seed,
              std::ostream& log);
void CmdEval(const RunConfig& config, const std::string& strategy, std::uint64_t seed,
             std::ostream& log);
// Aggregates every results file in the output directory into report.csv
// and pvalues.csv.
ComparisonReport CmdReport(const RunConfig& config, std::ostream& log);
// Grid over sweep_counts (augmentation count) or sweep_sizes (demo
// episodes): sweep_<kind>.csv holds one row per (strategy, x, seed) and
// sweep_<kind>_iqm.csv the IQM and CI per (strategy, x).
void CmdSweepAug(const RunConfig& config, std::ostream& log);
void CmdSweepDemo(const RunConfig& config, std::ostream& log);
AuditReport CmdAudit(const RunConfig& config, const std::string& path, std::ostream& log);
// Measures expert and uniform-random returns (100 episodes each) for the
// given tasks and writes the anchors file.
void CmdAnchors(const RunConfig& config, const std::vector<std::string>& tasks,
                std::ostream& log);

}  // namespace guda

#endif  // GUDA_PIPELINE_H_
