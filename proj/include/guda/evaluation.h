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

#ifndef GUDA_EVALUATION_H_
#define GUDA_EVALUATION_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "guda/env.h"
#include "guda/learner.h"
#include "guda/rng.h"
#include "guda/stats.h"

namespace guda {

struct EvalResult {
  std::string task;
  std::string strategy;
  std::uint64_t seed = 0;
  // Free-form label of the run (augmentation count, demo size); -1 if unset.
  long long n_aug = -1;
  std::vector<double> returns;
  std::vector<bool> successes;
  std::vector<int> lengths;

  double MeanReturn() const;
  double IqmReturn() const;
  double SuccessRate() const;
  // Throws DataError when the lists differ in length or a return is not finite.
  void Validate() const;
  bool operator==(const EvalResult&) const = default;
};

// Runs `episodes` episodes; episode i draws from rng.Child(i), so results do
// not depend on `workers`. Each episode stops after a terminal transition or
// the task horizon. Throws NumericError on a non-finite action.
EvalResult Rollout(const Policy& policy, const Env& env, int episodes,
                   const RngStream& rng, int workers = 1);

// Per-task anchors read from a JSON file:
//   {"version": 1, "anchors": {"<task>": {"expert": R, "random": R}}}
using AnchorTable = std::map<std::string, NormalizationAnchors>;
AnchorTable ReadAnchorsFile(const std::string& path);
void WriteAnchorsFile(const std::string& path, const AnchorTable& anchors);
// Throws ConfigError when the task has no anchors.
const NormalizationAnchors& AnchorsFor(const AnchorTable& table, const std::string& task);

// One JSON object per line. When anchors are given, normalized per-seed
// mean and within-run episode IQM are recorded alongside the raw lists.
void WriteEvalResult(std::ostream& out, const EvalResult& result,
                     const NormalizationAnchors* anchors = nullptr);
std::vector<EvalResult> ReadEvalResults(std::istream& in);
std::vector<EvalResult> ReadEvalResultsFile(const std::string& path);

struct StrategySummary {
  std::string task;
  std::string strategy;
  std::size_t seeds = 0;
  // Normalized mean return of each seed, in input order.
  std::vector<double> per_seed;
  double iqm_norm_return = 0.0;
  Interval ci;
  double success_rate = 0.0;
};

struct PairwiseTest {
  std::string a;
  std::string b;
  TTestResult test;
};

struct ComparisonReport {
  std::vector<StrategySummary> summaries;  // ranked, best first
  std::vector<PairwiseTest> tests;
};

struct CompareOptions {
  int resamples = 2000;
  double level = 0.95;
  std::uint64_t seed = 0;
};

// IQM across seeds of per-seed mean normalized return, with a bootstrap CI
// over seeds and pairwise Welch t-tests. Needs at least two strategies with
// at least two seeds each, all on one task.
ComparisonReport CompareStrategies(
    const std::map<std::string, std::vector<EvalResult>>& results,
    const NormalizationAnchors& anchors, const CompareOptions& options = {});

// Columns: task,strategy,seeds,IQM_norm_return,CI_low,CI_high,success_rate
void WriteReportCsv(std::ostream& out, const std::vector<StrategySummary>& rows);
// Columns: strategy_a,strategy_b,t,df,p_value
void WritePValuesCsv(std::ostream& out, const std::vector<PairwiseTest>& tests);

// Shortest decimal that parses back to the value, for CSV output.
std::string FormatCsvReal(double value);

}  // namespace guda

#endif  // GUDA_EVALUATION_H_
