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

#include "guda/demonstrators.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>

#include "guda/error.h"
#include "guda/maze.h"
#include "guda/parking.h"
#include "guda/soccer.h"

namespace guda {
namespace {

double Clamp1(double x) { return std::clamp(x, -1.0, 1.0); }

Vec2 ClipNorm(Vec2 v, double max_norm) {
  const double n = v.Norm();
  return n > max_norm ? v * (max_norm / n) : v;
}

Vec2 Unit(Vec2 v) {
  const double n = v.Norm();
  return n > 0.0 ? v * (1.0 / n) : Vec2{};
}

void AddActionNoise(const Env& env, double sigma, ActionVector& a, RngStream& rng) {
  if (sigma <= 0.0) return;
  const MdpSpec& mdp = env.mdp();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double half = 0.5 * (mdp.action_high[i] - mdp.action_low[i]);
    a[i] = std::clamp(a[i] + rng.Normal(0.0, sigma * half), mdp.action_low[i],
                      mdp.action_high[i]);
  }
}

// ---------------------------------------------------------------- maze

constexpr double kMazeCruise = 0.5;
constexpr double kMazeGain = 0.5;

Vec2 CellCenter(Cell c) { return {c.col + 0.5, c.row + 0.5}; }

// Force that steers the point mass along `field` toward `target`.
ActionVector MazeSeek(const PointMassMaze& env, const PathField& field, Vec2 target,
                      const StateVector& s) {
  const PointMassParams& pp = env.params();
  const Vec2 p{s[0], s[1]};
  const Vec2 v{s[2], s[3]};
  const Cell c = MazeSpec::CellOf(p);
  Vec2 aim = target;
  double speed = kMazeCruise;
  const Vec2 dir = env.spec().IsOpen(c) ? field.Direction(c) : Vec2{};
  if (dir.Norm() > 0.0) {
    aim = CellCenter({c.col + static_cast<int>(dir.x), c.row + static_cast<int>(dir.y)});
  } else {
    speed = std::min(kMazeCruise, 1.5 * (target - p).Norm());
  }
  const Vec2 desired = Unit(aim - p) * speed;
  const Vec2 force = (desired - v) * kMazeGain + v * pp.friction;
  const Vec2 a = ClipNorm(force * (1.0 / (pp.dt * pp.max_force)), 1.0);
  return {a.x, a.y};
}

class MazeDemonstrator : public Demonstrator {
 public:
  MazeDemonstrator(std::shared_ptr<const PointMassMaze> env, DemoNoise noise)
      : env_(std::move(env)), noise_(noise) {}

  void Reset(const StateVector&, RngStream& rng) override {
    detour_.reset();
    MaybeStartDetour(rng);
  }

  ActionVector Act(const StateVector& s, RngStream& rng) override {
    const Vec2 p{s[0], s[1]};
    if (detour_) {
      ++detour_->steps;
      if (!detour_->arrived && (p - detour_->target).Norm() < 0.3) detour_->arrived = true;
      if (detour_->arrived && detour_->linger-- <= 0) {
        detour_.reset();
        MaybeStartDetour(rng);
      } else if (detour_->steps > kMaxDetourSteps) {
        detour_.reset();
      }
    }
    ActionVector a = detour_ ? MazeSeek(*env_, detour_->field, detour_->target, s)
                             : MazeSeek(*env_, env_->field(), env_->spec().goal(), s);
    AddActionNoise(*env_, noise_.action_sigma, a, rng);
    return a;
  }

 private:
  static constexpr int kMaxDetourSteps = 200;

  // Detours chain: after each one another follows with the same probability.
  void MaybeStartDetour(RngStream& rng) {
    if (!rng.Bernoulli(noise_.detour_probability)) return;
    const auto& cells = env_->spec().open_cells();
    const Cell c = cells[rng.UniformIndex(cells.size())];
    detour_.emplace(Detour{CellCenter(c), ShortestPathField(env_->spec(), c),
                           static_cast<int>(rng.UniformIndex(101)), 0, false});
  }

  struct Detour {
    Vec2 target;
    PathField field;
    int linger;  // steps spent at the waypoint before moving on
    int steps;
    bool arrived;
  };
  std::shared_ptr<const PointMassMaze> env_;
  DemoNoise noise_;
  std::optional<Detour> detour_;
};

// ---------------------------------------------------------------- parking

ActionVector ParkingPursuit(const ParkingEnv& env, const StateVector& s) {
  const ParkingParams& pp = env.params();
  const Vec2 p{s[0], s[1]};
  const double heading = s[2];
  const double speed = s[3];
  const Vec2 g{s[4], s[5]};
  const Vec2 u{std::cos(s[6]), std::sin(s[6])};

  // Pursue a point on the spot's approach axis, ahead of the car's
  // projection onto it and never past the spot.
  const double along = (p - g).Dot(u);
  const double remaining = std::max(-along, 0.0);
  const double lookahead = std::clamp(0.6 * remaining, 0.6, 2.5);
  const Vec2 target = g + u * std::min(along + lookahead, 0.0);
  const Vec2 to_target = target - p;
  double steer = 0.0;
  const double ld = to_target.Norm();
  if (ld > 1e-6) {
    const double alpha = WrapAngle(to_target.Angle() - heading);
    steer = std::atan2(2.0 * pp.wheelbase * std::sin(alpha), ld);
  }
  const double v_des = std::min(1.5, std::sqrt(2.0 * 1.0 * remaining));
  const double accel = (v_des - speed) / pp.dt;
  return {Clamp1(accel / pp.max_accel), Clamp1(steer / pp.max_steer)};
}

class ParkingDemonstrator : public Demonstrator {
 public:
  ParkingDemonstrator(std::shared_ptr<const ParkingEnv> env, DemoNoise noise)
      : env_(std::move(env)), noise_(noise) {}

  void Reset(const StateVector&, RngStream& rng) override {
    wander_steps_ = 0;
    if (rng.Bernoulli(noise_.detour_probability)) {
      wander_steps_ = 10 + static_cast<int>(rng.UniformIndex(15));
      wander_steer_ = rng.Uniform(-1.0, 1.0);
    }
  }

  ActionVector Act(const StateVector& s, RngStream& rng) override {
    ActionVector a = ParkingPursuit(*env_, s);
    if (wander_steps_ > 0) {
      --wander_steps_;
      a = {0.4, wander_steer_};
    }
    AddActionNoise(*env_, noise_.action_sigma, a, rng);
    return a;
  }

 private:
  std::shared_ptr<const ParkingEnv> env_;
  DemoNoise noise_;
  int wander_steps_ = 0;
  double wander_steer_ = 0.0;
};

// ---------------------------------------------------------------- soccer

ActionVector SoccerDrive(const SoccerEnv& env, Vec2 agent, double heading, Vec2 target,
                         bool slow_near) {
  const SoccerParams& sp = env.params();
  const Vec2 to = target - agent;
  const double err = WrapAngle(to.Angle() - heading);
  const double turn = Clamp1(4.0 * err / sp.turn_rate);
  double forward = 0.0;
  if (std::cos(err) > 0.6) {
    forward = std::cos(err);
    if (slow_near) forward *= std::min(1.0, 2.0 * to.Norm());
  }
  return {Clamp1(forward), turn};
}

ActionVector SoccerDribble(const SoccerEnv& env, const StateVector& s) {
  const SoccerParams& sp = env.params();
  const Vec2 agent{s[0], s[1]};
  const double heading = s[2];
  const Vec2 ball{s[3], s[4]};
  const Vec2 aim = env.goal_center() + Vec2{0.3, 0.0};
  const Vec2 d = Unit(aim - ball);
  const double contact = sp.agent_radius + sp.ball_radius;

  const Vec2 rel = ball - agent;
  const double along = rel.Dot(d);
  const double lateral = d.Cross(rel);
  Vec2 target;
  if (along < 0.6 * contact) {
    // Beside or in front of the ball: swing around it on the agent's side.
    const Vec2 n = lateral > 0.0 ? Vec2{d.y, -d.x} : Vec2{-d.y, d.x};
    target = ball + n * (contact + 0.3) - d * (contact + 0.3);
  } else {
    // Behind the ball: line up, then drive through it toward the goal.
    const double lined_up = 1.0 - std::min(1.0, std::fabs(lateral) / 0.25);
    target = ball + d * (-(contact + 0.2) + lined_up * (contact + 0.6));
  }
  const Box2& f = sp.field;
  const double m = sp.agent_radius + 0.05;
  target.x = std::clamp(target.x, f.lo.x + m, f.hi.x - m);
  target.y = std::clamp(target.y, f.lo.y + m, f.hi.y - m);
  return SoccerDrive(env, agent, heading, target, true);
}

class SoccerDemonstrator : public Demonstrator {
 public:
  SoccerDemonstrator(std::shared_ptr<const SoccerEnv> env, DemoNoise noise)
      : env_(std::move(env)), noise_(noise) {}

  void Reset(const StateVector&, RngStream& rng) override {
    wander_steps_ = 0;
    if (rng.Bernoulli(noise_.detour_probability)) {
      wander_steps_ = 10 + static_cast<int>(rng.UniformIndex(20));
      wander_turn_ = rng.Uniform(-1.0, 1.0);
    }
  }

  ActionVector Act(const StateVector& s, RngStream& rng) override {
    ActionVector a = SoccerDribble(*env_, s);
    if (wander_steps_ > 0) {
      --wander_steps_;
      a = {0.5, wander_turn_};
    }
    AddActionNoise(*env_, noise_.action_sigma, a, rng);
    return a;
  }

 private:
  std::shared_ptr<const SoccerEnv> env_;
  DemoNoise noise_;
  int wander_steps_ = 0;
  double wander_turn_ = 0.0;
};

}  // namespace

DemoNoise DemoNoise::FromLevel(double level) {
  if (!(level >= 0.0 && level <= 1.0)) throw ConfigError("demo noise must lie in [0, 1]");
  return {0.5 * level, level};
}

std::unique_ptr<Demonstrator> MakeDemonstrator(EnvPtr env, DemoNoise noise) {
  if (auto maze = std::dynamic_pointer_cast<const PointMassMaze>(env)) {
    return std::make_unique<MazeDemonstrator>(std::move(maze), noise);
  }
  if (auto parking = std::dynamic_pointer_cast<const ParkingEnv>(env)) {
    return std::make_unique<ParkingDemonstrator>(std::move(parking), noise);
  }
  if (auto soccer = std::dynamic_pointer_cast<const SoccerEnv>(env)) {
    return std::make_unique<SoccerDemonstrator>(std::move(soccer), noise);
  }
  throw ConfigError("no demonstrator for task '" + env->task_id() + "'");
}

Policy ExpertPolicy(EnvPtr env) {
  if (auto maze = std::dynamic_pointer_cast<const PointMassMaze>(env)) {
    return [maze](const StateVector& s) {
      return MazeSeek(*maze, maze->field(), maze->spec().goal(), s);
    };
  }
  if (auto parking = std::dynamic_pointer_cast<const ParkingEnv>(env)) {
    return [parking](const StateVector& s) { return ParkingPursuit(*parking, s); };
  }
  if (auto soccer = std::dynamic_pointer_cast<const SoccerEnv>(env)) {
    return [soccer](const StateVector& s) { return SoccerDribble(*soccer, s); };
  }
  throw ConfigError("no demonstrator for task '" + env->task_id() + "'");
}

Policy RandomPolicy(EnvPtr env, std::uint64_t seed) {
  return [env = std::move(env), seed](const StateVector& s) {
    std::uint64_t h = SplitMix64(seed);
    for (double x : s) h = SplitMix64(h ^ std::bit_cast<std::uint64_t>(x));
    RngStream rng(seed, h);
    return env->RandomAction(rng);
  };
}

TrajectorySegment RunDemoEpisode(const Env& env, Demonstrator& demo, RngStream rng) {
  TrajectorySegment ep;
  ep.task_id = env.task_id();
  StateVector s = env.SampleInitial(rng);
  demo.Reset(s, rng);
  for (int t = 0; t < env.mdp().horizon; ++t) {
    Transition tr;
    tr.state = s;
    tr.action = demo.Act(s, rng);
    tr.next_state = env.Step(s, tr.action);
    tr.reward = env.Reward(s, tr.action);
    tr.terminal = env.IsTerminal(s, tr.next_state);
    s = tr.next_state;
    const bool done = tr.terminal;
    ep.transitions.push_back(std::move(tr));
    if (done) break;
  }
  return ep;
}

Dataset GenerateDemos(EnvPtr env, int episodes, double noise, std::uint64_t seed) {
  if (episodes < 1) throw ConfigError("need at least one demonstration episode");
  auto demo = MakeDemonstrator(env, DemoNoise::FromLevel(noise));
  Dataset ds;
  ds.task_id = env->task_id();
  ds.metadata.source = DatasetSource::kDemo;
  ds.metadata.seed = seed;
  ds.metadata.rule = "demo";
  const RngStream root(seed, 0);
  bool any_success = false;
  const int budget = 10 * episodes;
  int attempt = 0;
  while (static_cast<int>(ds.episodes.size()) < episodes || !any_success) {
    if (attempt >= budget) {
      throw DataError("demonstrator produced no successful episode in " +
                      std::to_string(budget) + " attempts on '" + env->task_id() + "'");
    }
    if (static_cast<int>(ds.episodes.size()) == episodes) ds.episodes.pop_back();
    TrajectorySegment ep = RunDemoEpisode(*env, *demo, root.Child(attempt++));
    any_success = any_success || env->IsSuccess(ep);
    ds.episodes.push_back(std::move(ep));
  }
  ds.metadata.extra_json = "{\"noise\":" + std::to_string(noise) +
                           ",\"attempts\":" + std::to_string(attempt) + "}";
  return ds;
}

}  // namespace guda
