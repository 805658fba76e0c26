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

#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"

#include "guda/daf.h"
#include "guda/dataset_io.h"
#include "guda/demonstrators.h"
#include "guda/env_registry.h"
#include "guda/error.h"
#include "guda/sampling.h"
#include "test_support.h"

namespace guda {
namespace {

using testing::ConstantActions;
using testing::ExpectedGuide;
using testing::Pos;
using testing::TransformedDisplacement;
using testing::KsTest;
using testing::MeanResultantLength;
using testing::TruncatedNormalCdf;

std::shared_ptr<const PointMassMaze> MazeEnv(const std::string& task) {
  return std::dynamic_pointer_cast<const PointMassMaze>(MakeEnv(task));
}

const Dataset& UmazeDemos() {
  static const Dataset demos = GenerateDemos(MakeEnv("maze-umaze"), 5, 0.5, 0);
  return demos;
}

// Signed angle from the guide to the displacement for `draws` accepted
// samples of the guided maze rule on windows of `demos`.
std::vector<double> AlignmentAngles(const PointMassMaze& env, const Dataset& demos,
                                    const AugmentationRule& rule, int draws,
                                    std::set<int>* cells = nullptr) {
  std::vector<double> angles;
  RngStream rng(31, 0);
  while (static_cast<int>(angles.size()) < draws) {
    const auto window = SegmentWindow(demos, rule.k, rng);
    AugmentedSegment aug;
    try {
      aug = SampleGuidedMaze(window, env, rule, rng);
    } catch (const RejectionExhausted&) {
      continue;
    }
    Vec2 anchor;
    const Vec2 d = TransformedDisplacement(env, window, aug.provenance, &anchor);
    EXPECT_EQ(Pos(aug.segment.front().state), anchor);
    if (cells) cells->insert(env.spec().CellIndex(MazeSpec::CellOf(anchor)));
    angles.push_back(WrapAngle(d.Angle() - ExpectedGuide(env, anchor).Angle()));
  }
  return angles;
}

TEST(GuidedMaze, ZeroNoiseAlignsExactly) {
  const auto env = MazeEnv("maze-umaze");
  auto rule = DefaultRule("maze-umaze", "guda");
  rule.angular_sigma = 0.0;
  for (double a : AlignmentAngles(*env, UmazeDemos(), rule, 2000)) {
    ASSERT_LE(std::fabs(a), 1e-9);
  }
}

TEST(GuidedMaze, NoiseFollowsTruncatedGaussian) {
  const auto env = MazeEnv("maze-umaze");
  const auto rule = DefaultRule("maze-umaze", "guda");
  ASSERT_EQ(rule.angular_sigma, 0.2);
  const auto angles = AlignmentAngles(*env, UmazeDemos(), rule, 10000);
  double mean = 0.0;
  int inside = 0;
  for (double a : angles) {
    mean += a;
    inside += std::fabs(a) <= 0.4 + 1e-12;
  }
  mean /= angles.size();
  EXPECT_LT(std::fabs(mean), 0.01);
  EXPECT_GE(inside, 0.95 * angles.size());
  const auto ks = KsTest(angles, [](double x) { return TruncatedNormalCdf(x, 0.2, 0.4); });
  EXPECT_GT(ks.p, 0.01) << "D = " << ks.statistic;
}

TEST(GuidedMaze, AnchorsCoverEveryOpenCell) {
  for (const char* task : {"maze-umaze", "maze-medium"}) {
    const auto env = MazeEnv(task);
    const auto demos = GenerateDemos(MakeEnv(task), 5, 0.5, 0);
    std::set<int> cells;
    AlignmentAngles(*env, demos, DefaultRule(task, "guda"), 5000, &cells);
    EXPECT_EQ(cells.size(), env->spec().open_cells().size()) << task;
  }
}

TEST(GuidedMaze, OutputsPassTheDafInvariants) {
  const auto env = MazeEnv("maze-umaze");
  const auto rule = DefaultRule("maze-umaze", "guda");
  RngStream rng(32, 0);
  for (int i = 0; i < 1000; ++i) {
    const auto window = SegmentWindow(UmazeDemos(), rule.k, rng);
    try {
      const auto aug = SampleGuidedMaze(window, *env, rule, rng);
      ASSERT_TRUE(ChainCheck(aug.segment));
      ASSERT_TRUE(env->IsValid(aug.segment));
      ASSERT_TRUE(env->HasClearance(aug.segment, rule.min_clearance));
      for (const auto& t : aug.segment.transitions) {
        ASSERT_EQ(t.reward, env->Reward(t.state, t.action));
      }
    } catch (const RejectionExhausted&) {
    }
  }
}

TEST(GuidedMaze, StationarySegmentIsRejected) {
  const auto env = MazeEnv("maze-umaze");
  const auto seg = testing::Rollout(*env, {3.5, 3.5, 0.0, 0.0}, ConstantActions({0.0, 0.0}, 4));
  RngStream rng(1, 1);
  EXPECT_THROW(SampleGuidedMaze(seg, *env, DefaultRule("maze-umaze", "guda"), rng),
               RejectionExhausted);
}

// Slow drift due east from the centre of cell (col, row).
TrajectorySegment EastDrift(const PointMassMaze& env, Cell c, double force, int steps) {
  return testing::Rollout(env, {c.col + 0.5, c.row + 0.5, 0.0, 0.0},
                          ConstantActions({force, 0.0}, steps));
}

AugmentationRule AntRule() {
  auto rule = DefaultRule("antmaze-umaze", "guda");
  EXPECT_EQ(rule.kind, RuleKind::kGuidedAntmazeStyle);
  return rule;
}

TEST(GuidedAntmaze, EastSegmentInEastFieldIsAlwaysAccepted) {
  const PointMassMaze env("corridor", MazeSpec::FromText("corridor", "##########\n#.......G#\n##########\n"));
  const auto seg = EastDrift(env, {1, 1}, 0.5, 3);
  auto rule = AntRule();
  rule.max_retries = 1;
  RngStream rng(33, 0);
  const int draws = 4000;
  int accepted = 0;
  std::set<int> cols;
  for (int i = 0; i < draws; ++i) {
    try {
      const auto aug = SampleGuidedAntmazeStyle(seg, env, rule, rng);
      ++accepted;
      cols.insert(MazeSpec::CellOf(Pos(aug.segment.front().state)).col);
      // Translate-only: actions and velocities are untouched.
      ASSERT_EQ(aug.segment.front().action, seg.front().action);
      ASSERT_EQ(aug.provenance.params.size(), 1u);
    } catch (const RejectionExhausted&) {
    }
  }
  // Seven of the eight cells have an eastward field.
  EXPECT_GE(accepted, draws * 7 / 8 - 3 * 21);
  for (int c = 1; c <= 7; ++c) EXPECT_TRUE(cols.count(c)) << c;
}

TEST(GuidedAntmaze, EastSegmentInNorthCorridorExhausts) {
  const PointMassMaze env("shaft", MazeSpec::FromText("shaft", "###\n#G#\n#.#\n#.#\n#.#\n###\n"));
  // Travels 0.8 east, which cannot fit a one-cell-wide shaft with clearance.
  const auto seg = EastDrift(env, {1, 4}, 0.0, 1);
  TrajectorySegment moving = seg;
  for (auto& t : moving.transitions) {
    t.state = {1.1, 4.5, 0.0, 0.0};
    t.next_state = {1.9, 4.5, 0.0, 0.0};
  }
  RngStream rng(34, 0);
  for (int i = 0; i < 50; ++i) {
    EXPECT_THROW(SampleGuidedAntmazeStyle(moving, env, AntRule(), rng), RejectionExhausted);
  }
}

TEST(GuidedAntmaze, AcceptanceRegionMatchesBruteForce) {
  const auto env = MazeEnv("antmaze-medium");
  const auto field = ShortestPathField(env->spec());
  auto rule = AntRule();
  rule.max_retries = 1;
  for (double heading : {0.0, kPi / 2, kPi, -kPi / 2, 0.4}) {
    TrajectorySegment seg;
    Transition t;
    t.state = {1.5, 1.5, 0.0, 0.0};
    t.action = {0.0, 0.0};
    t.next_state = {1.5 + 0.05 * std::cos(heading), 1.5 + 0.05 * std::sin(heading), 0.0, 0.0};
    seg.transitions = {t};
    seg.task_id = env->task_id();
    std::set<int> expected;
    for (Cell c : env->spec().open_cells()) {
      if (c == env->spec().goal_cell()) continue;
      if (AngleBetween(heading, field.Direction(c).Angle()) <= rule.align_threshold) {
        expected.insert(env->spec().CellIndex(c));
      }
    }
    std::set<int> seen;
    RngStream rng(35, static_cast<std::uint64_t>(heading * 1000 + 5000));
    for (int i = 0; i < 20000; ++i) {
      try {
        const auto aug = SampleGuidedAntmazeStyle(seg, *env, rule, rng);
        const Cell c = MazeSpec::CellOf(Pos(aug.segment.front().state));
        if (!(c == env->spec().goal_cell())) seen.insert(env->spec().CellIndex(c));
      } catch (const RejectionExhausted&) {
      }
    }
    EXPECT_EQ(seen, expected) << "heading " << heading;
  }
}

TEST(GuidedParking, SamplesParkSuccessfully) {
  const auto envp = MakeEnv("parking");
  const auto& env = dynamic_cast<const ParkingEnv&>(*envp);
  const auto demos = GenerateDemos(envp, 5, 0.5, 0);
  const auto rule = DefaultRule("parking", "guda");
  RngStream rng(36, 0);
  int success = 0;
  std::map<double, int> spots;
  const int draws = 1000;
  for (int i = 0; i < draws; ++i) {
    const auto& ep = demos.episodes[rng.UniformIndex(demos.episodes.size())];
    const auto aug = SampleGuidedParking(ep, env, rule, rng);
    ASSERT_TRUE(ChainCheck(aug.segment));
    ASSERT_TRUE(env.IsValid(aug.segment));
    success += env.IsSuccess(aug.segment);
    ++spots[aug.segment.front().state[4]];
  }
  EXPECT_GE(success, 0.99 * draws);
  ASSERT_EQ(spots.size(), 5u);
  for (const auto& [x, n] : spots) EXPECT_NEAR(n, draws / 5.0, 3.5 * std::sqrt(draws * 0.16));
}

TEST(GuidedParking, ZeroNoiseParksExactly) {
  const auto envp = MakeEnv("parking");
  const auto& env = dynamic_cast<const ParkingEnv&>(*envp);
  const auto demos = GenerateDemos(envp, 5, 0.5, 1);
  auto rule = DefaultRule("parking", "guda");
  rule.angular_sigma = 0.0;
  rule.positional_sigma = 0.0;
  RngStream rng(37, 0);
  for (int i = 0; i < 200; ++i) {
    const auto& ep = demos.episodes[i % demos.episodes.size()];
    const auto aug = SampleGuidedParking(ep, env, rule, rng);
    EXPECT_TRUE(env.IsSuccessState(aug.segment.back().state));
    // Earlier states can fall inside the goal tolerance and end the segment,
    // so check where the parameters send the source's final state.
    ASSERT_LE(aug.segment.size(), ep.size());
    StateVector last = ep.back().state;
    for (const auto& p : aug.provenance.params) TransformState(env.layout(), p, last);
    EXPECT_NEAR(last[0], last[4], 1e-9);
    EXPECT_NEAR(last[1], last[5], 1e-9);
    EXPECT_LE(AngleBetween(last[2], last[6]), 1e-9);
  }
}

TEST(GuidedSoccer, FinalBallAtGoalAndFairCoin) {
  const auto envp = MakeEnv("soccer");
  const auto& env = dynamic_cast<const SoccerEnv&>(*envp);
  const auto demos = GenerateDemos(envp, 5, 0.5, 0);
  const auto rule = DefaultRule("soccer", "guda");
  ASSERT_EQ(rule.positional_sigma, 0.0);
  RngStream rng(38, 0);
  int reflected = 0;
  int draws = 0;
  while (draws < 10000) {
    const auto& ep = demos.episodes[rng.UniformIndex(demos.episodes.size())];
    AugmentedSegment aug;
    try {
      aug = SampleGuidedSoccer(ep, env, rule, rng);
    } catch (const RejectionExhausted&) {
      continue;
    }
    ++draws;
    const auto& last = aug.segment.back().state;
    ASSERT_NEAR(last[3], env.goal_center().x, 1e-9);
    ASSERT_NEAR(last[4], env.goal_center().y, 1e-9);
    ASSERT_TRUE(env.IsValid(aug.segment));
    ASSERT_EQ(aug.segment.size(), ep.size());
    reflected += std::holds_alternative<ReflectParams>(aug.provenance.params.back());
  }
  EXPECT_NEAR(reflected / 10000.0, 0.5, 0.02);
}

TEST(RandomDA, DisplacementsAreIsotropic) {
  const auto env = MazeEnv("maze-open");
  const auto demos = GenerateDemos(MakeEnv("maze-open"), 5, 0.5, 0);
  const auto rule = DefaultRule("maze-open", "random");
  RngStream rng(39, 0);
  std::vector<double> absolute;
  while (absolute.size() < 10000) {
    const auto window = SegmentWindow(demos, rule.k, rng);
    try {
      const auto aug = SampleRandom(window, *env, rule, rng);
      ASSERT_TRUE(env->IsValid(aug.segment));
      Vec2 anchor;
      absolute.push_back(TransformedDisplacement(*env, window, aug.provenance, &anchor).Angle());
    } catch (const RejectionExhausted&) {
    }
  }
  EXPECT_LT(MeanResultantLength(absolute), 0.05);
}

TEST(GuidedMaze, DisplacementsFollowTheField) {
  const auto env = MazeEnv("maze-open");
  const auto demos = GenerateDemos(MakeEnv("maze-open"), 5, 0.5, 0);
  const auto angles = AlignmentAngles(*env, demos, DefaultRule("maze-open", "guda"), 10000);
  EXPECT_GT(MeanResultantLength(angles), 0.9);
}

TEST(RandomDA, GoalsAreRelabeledUniformly) {
  const auto envp = MakeEnv("parking");
  const auto demos = GenerateDemos(envp, 5, 0.5, 0);
  auto rule = DefaultRule("parking", "random");
  RngStream rng(40, 0);
  std::map<double, int> spots;
  int n = 0;
  while (n < 2000) {
    try {
      const auto aug = SampleRandom(demos.episodes[n % 5], *envp, rule, rng);
      ++spots[aug.segment.front().state[4]];
      ++n;
    } catch (const RejectionExhausted&) {
    }
  }
  ASSERT_EQ(spots.size(), 5u);
  for (const auto& [x, c] : spots) EXPECT_NEAR(c, 400, 3.5 * std::sqrt(2000 * 0.16));
}

TEST(Rules, DispatchRejectsMismatchedTasks) {
  const auto maze = MakeEnv("maze-umaze");
  const auto& seg = UmazeDemos().episodes[0];
  RngStream rng(1, 0);
  EXPECT_THROW(SampleAugmentation(seg, *maze, DefaultRule("parking", "guda"), rng), ConfigError);
  EXPECT_THROW(DefaultRule("maze-umaze", "none"), ConfigError);
  EXPECT_EQ(ParseRuleKind("guided-soccer"), RuleKind::kGuidedSoccer);
  EXPECT_THROW(ParseRuleKind("mixup"), ConfigError);
  AugmentationRule bad;
  bad.angular_sigma = -0.1;
  EXPECT_THROW(bad.Validate(), ConfigError);
  bad = {};
  bad.max_retries = 0;
  EXPECT_THROW(bad.Validate(), ConfigError);
}

TEST(Rules, DefaultWindowLengths) {
  EXPECT_EQ(DefaultRule("maze-large", "guda").k, 16u);
  EXPECT_EQ(DefaultRule("antmaze-large", "random").k, 16u);
  EXPECT_EQ(DefaultRule("parking", "guda").k, 0u);
  EXPECT_EQ(DefaultRule("soccer", "random").k, 0u);
}

std::string Serialize(const Dataset& d) {
  std::ostringstream out;
  WriteDataset(out, d);
  return out.str();
}

AugmentationJob Job(const Dataset& demos, const std::string& task, const std::string& strategy,
                    std::size_t n, std::uint64_t seed, int workers = 1) {
  AugmentationJob job;
  job.source = &demos;
  job.rule = DefaultRule(task, strategy);
  job.n = n;
  job.master_seed = seed;
  job.workers = workers;
  return job;
}

TEST(BuildDataset, StoppingRuleBoundsTheCount) {
  const auto env = MakeEnv("maze-umaze");
  const auto& demos = UmazeDemos();
  for (const char* strategy : {"guda", "random"}) {
    AugmentationStats stats;
    const auto out = BuildAugmentedDataset(Job(demos, "maze-umaze", strategy, 50000, 3), *env, &stats);
    const std::size_t base = demos.NumTransitions();
    EXPECT_GE(out.NumTransitions(), 50000 + base);
    EXPECT_LE(out.NumTransitions(), 50000 + base + 16);
    EXPECT_EQ(stats.augmented_transitions + base, out.NumTransitions());
    EXPECT_EQ(out.metadata.rule, RuleName(DefaultRule("maze-umaze", strategy).kind));
    EXPECT_EQ(out.metadata.seed, 3u);
    for (std::size_t i = 0; i < demos.episodes.size(); ++i) {
      ASSERT_EQ(out.episodes[i], demos.episodes[i]);
    }
    const auto meta = nlohmann::json::parse(out.metadata.extra_json);
    EXPECT_EQ(meta["n_target"], 50000);
    EXPECT_EQ(meta["provenance"].size(), out.episodes.size() - demos.episodes.size());
  }
}

TEST(BuildDataset, ZeroTargetReturnsTheDemos) {
  const auto env = MakeEnv("maze-umaze");
  const auto out = BuildAugmentedDataset(Job(UmazeDemos(), "maze-umaze", "guda", 0, 1), *env);
  EXPECT_EQ(out.episodes, UmazeDemos().episodes);
}

TEST(BuildDataset, DeterministicAcrossRunsAndWorkers) {
  const auto env = MakeEnv("maze-umaze");
  const auto& demos = UmazeDemos();
  const auto a = Serialize(BuildAugmentedDataset(Job(demos, "maze-umaze", "guda", 5000, 9), *env));
  const auto b = Serialize(BuildAugmentedDataset(Job(demos, "maze-umaze", "guda", 5000, 9), *env));
  const auto c =
      Serialize(BuildAugmentedDataset(Job(demos, "maze-umaze", "guda", 5000, 9, 4), *env));
  const auto d = Serialize(BuildAugmentedDataset(Job(demos, "maze-umaze", "guda", 5000, 10), *env));
  const auto r = Serialize(BuildAugmentedDataset(Job(demos, "maze-umaze", "random", 5000, 9), *env));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_NE(a, d);
  EXPECT_NE(a, r);
}

TEST(BuildDataset, EveryTaskYieldsExactRewardsAndChains) {
  for (const auto& task : RegisteredTasks()) {
    const auto env = MakeEnv(task);
    const auto demos = GenerateDemos(env, 5, 0.5, 0);
    for (const char* strategy : {"guda", "random"}) {
      const auto out = BuildAugmentedDataset(Job(demos, task, strategy, 2000, 2), *env);
      for (const auto& ep : out.episodes) {
        ASSERT_TRUE(ChainCheck(ep)) << task;
        ASSERT_TRUE(TerminalCheck(ep)) << task;
        ASSERT_TRUE(env->IsValid(ep)) << task;
        for (const auto& t : ep.transitions) {
          ASSERT_EQ(t.reward, env->Reward(t.state, t.action)) << task;
          ASSERT_EQ(t.terminal, env->IsTerminal(t.state, t.next_state)) << task;
        }
      }
    }
  }
}

TEST(BuildDataset, PersistentRejectionNamesTheRule) {
  const auto env = MakeEnv("maze-umaze");
  Dataset still;
  still.task_id = "maze-umaze";
  still.episodes.push_back(
      testing::Rollout(*env, {3.5, 3.5, 0.0, 0.0}, ConstantActions({0.0, 0.0}, 20)));
  auto job = Job(still, "maze-umaze", "guda", 100, 0);
  job.max_window_failures = 50;
  try {
    BuildAugmentedDataset(job, *env);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("guided-maze2d"), std::string::npos);
  }
}

}  // namespace
}  // namespace guda
