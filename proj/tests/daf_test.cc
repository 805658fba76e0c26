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
#include <cstring>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"

#include "guda/daf.h"
#include "guda/env_registry.h"
#include "guda/error.h"
#include "guda/maze.h"
#include "guda/parking.h"
#include "guda/soccer.h"
#include "test_support.h"

namespace guda {
namespace {

using testing::ConstantActions;
using testing::MaxAbsDiff;

PointMassMaze Arena() { return PointMassMaze("maze-open", MazeSpec::Builtin("open")); }

// Random-force segment in the middle of the open arena.
TrajectorySegment ArenaSegment(const Env& env, RngStream& rng, int length = 12) {
  std::vector<ActionVector> actions;
  for (int i = 0; i < length; ++i) {
    const double a = rng.Uniform(-kPi, kPi);
    const double r = 0.7 * std::sqrt(rng.Uniform01());
    actions.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return testing::Rollout(env, {rng.Uniform(3.0, 4.0), rng.Uniform(3.0, 4.0), 0.0, 0.0},
                          actions);
}

std::vector<Vec2> Positions(const TrajectorySegment& seg, IndexPair idx) {
  std::vector<Vec2> out;
  for (const auto& t : seg.transitions) out.push_back(GetVec(t.state, idx));
  out.push_back(GetVec(seg.back().next_state, idx));
  return out;
}

double MaxStateDiff(const TrajectorySegment& a, const TrajectorySegment& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max({m, MaxAbsDiff(a.transitions[i].state, b.transitions[i].state),
                  MaxAbsDiff(a.transitions[i].next_state, b.transitions[i].next_state),
                  MaxAbsDiff(a.transitions[i].action, b.transitions[i].action)});
  }
  return m;
}

// Checks r = reward(s, a) exactly with a loop independent of the DAF code.
void ExpectRewardsExact(const Env& env, const TrajectorySegment& seg) {
  for (const auto& t : seg.transitions) {
    ASSERT_EQ(t.reward, env.Reward(t.state, t.action));
    ASSERT_EQ(t.terminal, env.IsTerminal(t.state, t.next_state));
  }
}

TEST(Translate, ZeroIsIdentity) {
  const auto env = Arena();
  RngStream rng(1, 0);
  const auto seg = ArenaSegment(env, rng);
  EXPECT_EQ(Translate(seg, {0.0, 0.0}, env).segment, seg);
}

TEST(Translate, UnitShiftMovesPositionsOnly) {
  const auto env = Arena();
  RngStream rng(2, 0);
  const auto seg = ArenaSegment(env, rng);
  const auto out = Translate(seg, {1.0, 0.0}, env).segment;
  ASSERT_EQ(out.size(), seg.size());
  for (std::size_t i = 0; i < seg.size(); ++i) {
    const auto& a = seg.transitions[i];
    const auto& b = out.transitions[i];
    EXPECT_EQ(b.state[0], a.state[0] + 1.0);
    EXPECT_EQ(b.state[1], a.state[1]);
    EXPECT_EQ(b.state[2], a.state[2]);
    EXPECT_EQ(b.state[3], a.state[3]);
    EXPECT_EQ(b.action, a.action);
  }
  EXPECT_TRUE(ChainCheck(out));
}

TEST(Translate, OntoTheGoalEarnsReward) {
  const auto env = Arena();
  RngStream rng(3, 0);
  const auto seg = ArenaSegment(env, rng, 6);
  const Vec2 g = env.spec().goal();
  const Vec2 last = GetVec(seg.back().state, {0, 1});
  const auto out = Translate(seg, g - last, env).segment;
  ExpectRewardsExact(env, out);
  EXPECT_EQ(out.back().reward, 1.0);
  EXPECT_TRUE(out.back().terminal);
}

TEST(Translate, IntoAWallIsInvalid) {
  const auto env = PointMassMaze("maze-umaze", MazeSpec::Builtin("umaze"));
  const auto seg = testing::Rollout(env, {2.5, 3.5, 0.0, 0.0}, ConstantActions({0.1, 0.0}, 5));
  ASSERT_TRUE(env.IsValid(seg));
  // Row 2 is wall except column 3.
  EXPECT_THROW(Translate(seg, {-1.0, -1.0}, env), InvalidPlacement);
  EXPECT_FALSE(TryCompose(seg, {TranslateParams{{-1.0, -1.0}}}, env).has_value());
}

TEST(Rotate, Examples) {
  const auto env = Arena();
  StateVector p{1.0, 0.0, 1.0, 0.0};
  TransformState(env.layout(), MakeRotate(kPi / 2, {0.0, 0.0}), p);
  EXPECT_NEAR(p[0], 0.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0, 1e-15);
  EXPECT_NEAR(p[2], 0.0, 1e-15);
  EXPECT_NEAR(p[3], 1.0, 1e-15);
  EXPECT_EQ(MakeRotate(3 * kPi, {}).phi, kPi);
}

TEST(Rotate, ZeroIsIdentity) {
  const auto env = Arena();
  RngStream rng(4, 0);
  const auto seg = ArenaSegment(env, rng);
  EXPECT_EQ(Rotate(seg, 0.0, {3.5, 3.5}, env).segment, seg);
}

TEST(Rotate, InverseRestoresTheSegment) {
  const auto env = Arena();
  RngStream rng(5, 0);
  for (int i = 0; i < 200; ++i) {
    const auto seg = ArenaSegment(env, rng);
    const double phi = rng.Uniform(-kPi, kPi);
    const Vec2 pivot{rng.Uniform(3.0, 4.0), rng.Uniform(3.0, 4.0)};
    const auto once = Rotate(seg, phi, pivot, env).segment;
    const auto back = Rotate(once, -phi, pivot, env).segment;
    ASSERT_LE(MaxStateDiff(back, seg), 1e-12);
  }
}

TEST(Reflect, Examples) {
  const auto env = Arena();
  StateVector p{1.0, 1.0, 0.0, 0.0};
  TransformState(env.layout(), MakeReflect({0.0, 0.0}, {1.0, 0.0}), p);
  EXPECT_EQ(p[0], 1.0);
  EXPECT_EQ(p[1], -1.0);
  const auto axis = MakeReflect({0.0, 0.0}, {3.0, 4.0});
  EXPECT_NEAR(axis.direction.Norm(), 1.0, 1e-15);
  EXPECT_THROW(MakeReflect({0.0, 0.0}, {0.0, 0.0}), ConfigError);
}

TEST(Reflect, IsAnInvolution) {
  SoccerEnv env;
  RngStream rng(6, 0);
  for (int i = 0; i < 200; ++i) {
    const auto s0 = env.SampleInitial(rng);
    std::vector<ActionVector> actions;
    for (int j = 0; j < 10; ++j) actions.push_back(env.RandomAction(rng));
    const auto seg = testing::Rollout(env, s0, actions);
    if (!env.IsValid(seg)) continue;
    const double t = rng.Uniform(-kPi, kPi);
    const ReflectParams axis = MakeReflect({rng.Uniform(-0.1, 0.1), rng.Uniform(-0.1, 0.1)},
                                           {std::cos(t), std::sin(t)});
    const auto once = TryCompose(seg, {axis}, env);
    // A reflected segment may score and be cut at the new terminal.
    if (!once || once->size() != seg.size()) continue;
    const auto twice = TryCompose(*once, {axis}, env);
    ASSERT_TRUE(twice.has_value());
    ASSERT_EQ(twice->size(), seg.size());
    for (std::size_t k = 0; k < seg.size(); ++k) {
      const auto& a = seg.transitions[k];
      const auto& b = twice->transitions[k];
      ASSERT_LE(std::fabs(WrapAngle(a.state[2] - b.state[2])), 1e-12);
      for (int c : {0, 1, 3, 4}) ASSERT_NEAR(a.state[c], b.state[c], 1e-12);
      ASSERT_LE(MaxAbsDiff(a.action, b.action), 1e-12);
    }
  }
}

TEST(Reflect, HeadingsAndTurnRates) {
  SoccerEnv env;
  StateVector s{1.0, 1.0, 0.3, 2.0, -1.0};
  TransformState(env.layout(), MakeReflect({0.0, 0.0}, {1.0, 0.0}), s);
  EXPECT_EQ(s[2], -0.3);
  EXPECT_EQ(s[4], 1.0);
  ActionVector a{0.5, 0.25};
  TransformAction(env.layout(), MakeReflect({0.0, 0.0}, {1.0, 0.0}), a);
  EXPECT_EQ(a[0], 0.5);
  EXPECT_EQ(a[1], -0.25);
  StateVector t{0.0, 0.0, 0.0, 0.0, 0.0};
  TransformState(env.layout(), MakeReflect({0.0, 0.0}, {1.0, 1.0}), t);
  EXPECT_NEAR(t[2], kPi / 2, 1e-15);
}

// Discrete signed curvature of a polyline, summed over interior vertices.
double TotalTurning(const std::vector<Vec2>& p) {
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    const Vec2 a = p[i] - p[i - 1];
    const Vec2 b = p[i + 1] - p[i];
    sum += std::atan2(a.Cross(b), a.Dot(b));
  }
  return sum;
}

TEST(Reflect, LeftCurveBecomesRightCurve) {
  SoccerEnv env;
  const auto seg =
      testing::Rollout(env, {-2.0, -1.0, 0.0, 2.0, 2.0}, ConstantActions({0.8, 0.6}, 15));
  ASSERT_TRUE(env.IsValid(seg));
  const double left = TotalTurning(Positions(seg, {0, 1}));
  ASSERT_GT(left, 0.5);
  const auto out = Reflect(seg, MakeReflect({0.0, 0.0}, {1.0, 0.0}), env).segment;
  EXPECT_NEAR(TotalTurning(Positions(out, {0, 1})), -left, 1e-12);
  // The reflected segment is itself a valid rollout.
  for (const auto& t : out.transitions) {
    ASSERT_LE(MaxAbsDiff(env.Step(t.state, t.action), t.next_state), 1e-9);
  }
}

TEST(Transforms, GroupLawsOnPoints) {
  const auto env = Arena();
  RngStream rng(7, 0);
  for (int i = 0; i < 10000; ++i) {
    const StateVector s{rng.Uniform(-5, 5), rng.Uniform(-5, 5), rng.Uniform(-1, 1),
                        rng.Uniform(-1, 1)};
    const double phi = rng.Uniform(-kPi, kPi);
    const Vec2 pivot{rng.Uniform(-5, 5), rng.Uniform(-5, 5)};
    StateVector r = s;
    TransformState(env.layout(), MakeRotate(phi, pivot), r);
    TransformState(env.layout(), MakeRotate(-phi, pivot), r);
    ASSERT_LE(MaxAbsDiff(r, s), 1e-12);
    const double t = rng.Uniform(-kPi, kPi);
    const auto axis = MakeReflect(pivot, {std::cos(t), std::sin(t)});
    StateVector f = s;
    TransformState(env.layout(), axis, f);
    TransformState(env.layout(), axis, f);
    ASSERT_LE(MaxAbsDiff(f, s), 1e-12);
  }
}

TEST(Transforms, RigidMotionsPreserveDistances) {
  SoccerEnv env;
  RngStream rng(8, 0);
  for (int i = 0; i < 10000; ++i) {
    StateVector s{rng.Uniform(-4, 4), rng.Uniform(-3, 3), rng.Uniform(-kPi, kPi),
                  rng.Uniform(-4, 4), rng.Uniform(-3, 3)};
    const double before = std::hypot(s[0] - s[3], s[1] - s[4]);
    const double t = rng.Uniform(-kPi, kPi);
    const Vec2 point{rng.Uniform(-4, 4), rng.Uniform(-3, 3)};
    const std::vector<TransformParams> chain = {
        TranslateParams{{rng.Uniform(-2, 2), rng.Uniform(-2, 2)}},
        MakeRotate(rng.Uniform(-kPi, kPi), point),
        MakeReflect(point, {std::cos(t), std::sin(t)})};
    for (const auto& p : chain) {
      TransformState(env.layout(), p, s);
      ASSERT_NEAR(std::hypot(s[0] - s[3], s[1] - s[4]), before, 1e-12);
    }
  }
}

TEST(Compose, IdentityChain) {
  const auto env = Arena();
  RngStream rng(9, 0);
  const auto seg = ArenaSegment(env, rng);
  const auto out = Compose(seg, {TranslateParams{{0.0, 0.0}}, MakeRotate(0.0, {3.5, 3.5})}, env);
  EXPECT_EQ(out.segment, seg);
  EXPECT_THROW(Compose(seg, {}, env), ConfigError);
}

TEST(Compose, TranslateThenRotateEqualsShiftedPivotFirst) {
  const auto env = Arena();
  RngStream rng(10, 0);
  for (int i = 0; i < 1000; ++i) {
    const auto seg = ArenaSegment(env, rng);
    const Vec2 d{rng.Uniform(-0.5, 0.5), rng.Uniform(-0.5, 0.5)};
    const double phi = rng.Uniform(-kPi, kPi);
    const Vec2 pivot{rng.Uniform(3.0, 4.0), rng.Uniform(3.0, 4.0)};
    const auto a = TryCompose(seg, {TranslateParams{d}, MakeRotate(phi, pivot)}, env);
    const auto b = TryCompose(seg, {MakeRotate(phi, pivot - d), TranslateParams{d}}, env);
    ASSERT_TRUE(a && b);
    ASSERT_LE(MaxStateDiff(*a, *b), 1e-12);
  }
}

TEST(Compose, AugmentedArenaSegmentsStayDynamicallyConsistent) {
  const auto env = Arena();
  RngStream rng(11, 0);
  int checked = 0;
  while (checked < 500) {
    const auto seg = ArenaSegment(env, rng);
    const double t = rng.Uniform(-kPi, kPi);
    const Vec2 pivot = GetVec(seg.front().state, {0, 1});
    const auto out = TryCompose(seg,
                                {TranslateParams{{rng.Uniform(-1, 1), rng.Uniform(-1, 1)}},
                                 MakeRotate(rng.Uniform(-kPi, kPi), pivot),
                                 MakeReflect(pivot, {std::cos(t), std::sin(t)})},
                                env);
    if (!out || !env.HasClearance(*out, 0.1)) continue;
    ++checked;
    EXPECT_TRUE(ChainCheck(*out));
    ExpectRewardsExact(env, *out);
    for (const auto& tr : out->transitions) {
      ASSERT_LE(MaxAbsDiff(env.Step(tr.state, tr.action), tr.next_state), 1e-9);
    }
  }
}

StateVector Goal(const StateVector& s) { return {s[4], s[5], s[6]}; }

TrajectorySegment ParkingSegment(const ParkingEnv& env, RngStream& rng) {
  std::vector<ActionVector> actions;
  for (int i = 0; i < 30; ++i) actions.push_back({0.4, rng.Uniform(-0.5, 0.5)});
  return testing::Rollout(env, env.SampleInitial(rng), actions);
}

TEST(RelabelGoal, SameGoalIsIdentity) {
  ParkingEnv env;
  RngStream rng(12, 0);
  const auto seg = ParkingSegment(env, rng);
  EXPECT_EQ(RelabelGoal(seg, Goal(seg.front().state), env).segment, seg);
}

TEST(RelabelGoal, AchievedPoseGivesZeroFinalReward) {
  ParkingEnv env;
  RngStream rng(13, 0);
  const auto seg = ParkingSegment(env, rng);
  const auto& first = seg.front().state;
  const auto out = RelabelGoal(seg, {first[0], first[1], first[2]}, env).segment;
  EXPECT_EQ(out.front().reward, 0.0);
  EXPECT_TRUE(out.front().terminal);
}

TEST(RelabelGoal, RewardsMatchOracleAndPhysicsIsUntouched) {
  ParkingEnv env;
  RngStream rng(14, 0);
  for (int i = 0; i < 200; ++i) {
    const auto seg = ParkingSegment(env, rng);
    const StateVector goal{rng.Uniform(-6, 6), rng.Uniform(-2, 8), rng.Uniform(-kPi, kPi)};
    const auto out = RelabelGoal(seg, goal, env).segment;
    ExpectRewardsExact(env, out);
    EXPECT_TRUE(ChainCheck(out));
    for (std::size_t k = 0; k < out.size(); ++k) {
      const auto& a = seg.transitions[k];
      const auto& b = out.transitions[k];
      ASSERT_EQ(std::memcmp(a.state.data(), b.state.data(), 4 * sizeof(double)), 0);
      ASSERT_EQ(std::memcmp(a.next_state.data(), b.next_state.data(), 4 * sizeof(double)), 0);
      ASSERT_EQ(a.action, b.action);
      ASSERT_EQ(Goal(b.state), goal);
      ASSERT_EQ(Goal(b.next_state), goal);
    }
  }
}

TEST(RelabelGoal, NeedsAGoalComponent) {
  const auto env = Arena();
  RngStream rng(15, 0);
  const auto seg = ArenaSegment(env, rng);
  try {
    RelabelGoal(seg, {1.0, 2.0}, env);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_STREQ(e.what(), "no goal component");
  }
}

TEST(RelabelGoal, ParkingChainPassesChecks) {
  ParkingEnv env;
  RngStream rng(16, 0);
  for (int i = 0; i < 200; ++i) {
    const auto seg = ParkingSegment(env, rng);
    const auto& spot = env.params().spots[rng.UniformIndex(5)];
    const auto& last = seg.back().state;
    const Vec2 end{last[0], last[1]};
    const auto out = Compose(seg,
                             {RelabelGoalParams{{spot.position.x, spot.position.y, spot.heading}},
                              TranslateParams{spot.position - end},
                              MakeRotate(spot.heading - last[2], spot.position)},
                             env)
                         .segment;
    EXPECT_TRUE(ChainCheck(out));
    EXPECT_TRUE(env.IsValid(out));
    ExpectRewardsExact(env, out);
  }
}

TEST(Params, JsonRecords) {
  const auto t = nlohmann::json::parse(ParamsToJson(TranslateParams{{1.0, -0.5}}));
  EXPECT_EQ(t["op"], "translate");
  EXPECT_EQ(t["delta"][0].get<double>(), 1.0);
  EXPECT_EQ(t["delta"][1].get<double>(), -0.5);
  const double phi = 1.0 / 3.0;
  const auto r = nlohmann::json::parse(ParamsToJson(MakeRotate(phi, {1.0, 2.0})));
  EXPECT_EQ(r["op"], "rotate");
  EXPECT_EQ(r["phi"].get<double>(), phi);
  EXPECT_EQ(nlohmann::json::parse(ParamsToJson(RelabelGoalParams{{1.0, 2.0, 3.0}}))["op"],
            "relabel_goal");
}

}  // namespace
}  // namespace guda
