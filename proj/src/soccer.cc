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

#include "guda/soccer.h"

#include <cmath>

namespace guda {

SoccerEnv::SoccerEnv(SoccerParams params) : params_(params) {
  mdp_.state_dim = 5;
  mdp_.action_dim = 2;
  mdp_.gamma = 0.99;
  mdp_.horizon = params_.horizon;
  mdp_.action_low = {-1.0, -1.0};
  mdp_.action_high = {1.0, 1.0};
  layout_.positions = {{0, 1}, {3, 4}};
  layout_.headings = {2};
  layout_.agent = 0;
  layout_.object = 1;
  layout_.action_turn_rates = {1};
}

StateVector SoccerEnv::Step(const StateVector& state,
                            const ActionVector& action) const {
  CheckState(state);
  CheckAction(action);
  const double dt = params_.dt;
  const double theta = state[2];
  const double speed = action[0] * params_.agent_speed;
  const double omega = action[1] * params_.turn_rate;

  const Vec2 agent{state[0] + speed * dt * std::cos(theta),
                   state[1] + speed * dt * std::sin(theta)};
  Vec2 ball{state[3], state[4]};
  const double contact = params_.agent_radius + params_.ball_radius;
  const Vec2 offset = ball - agent;
  const double dist = offset.Norm();
  if (dist < contact) {
    // A coincident ball is pushed along the heading.
    const Vec2 dir = dist > 0.0 ? offset * (1.0 / dist)
                                : Vec2{std::cos(theta), std::sin(theta)};
    ball = agent + dir * contact;
  }
  return {agent.x, agent.y, WrapAngle(theta + omega * dt), ball.x, ball.y};
}

double SoccerEnv::Reward(const StateVector& state, const ActionVector&) const {
  const Vec2 agent{state[0], state[1]};
  const Vec2 ball{state[3], state[4]};
  double r = -(params_.w_agent_ball * (agent - ball).Norm() +
               params_.w_ball_goal * (ball - goal_center()).Norm());
  if (BallInGoal(ball)) r += params_.goal_bonus;
  return r;
}

bool SoccerEnv::BallInGoal(Vec2 ball) const {
  const double line = params_.field.hi.x;
  return ball.x >= line && ball.x <= line + params_.goal_depth &&
         std::fabs(ball.y) <= params_.goal_half_width;
}

bool SoccerEnv::IsValidState(const StateVector& state) const {
  if (static_cast<int>(state.size()) != mdp_.state_dim) return false;
  for (double x : state) {
    if (!std::isfinite(x)) return false;
  }
  const Vec2 ball{state[3], state[4]};
  return params_.field.Contains({state[0], state[1]}) &&
         (params_.field.Contains(ball) || BallInGoal(ball));
}

bool SoccerEnv::IsSuccessState(const StateVector& state) const {
  return BallInGoal({state[3], state[4]});
}

bool SoccerEnv::IsValid(const TrajectorySegment& segment) const {
  for (const auto& tr : segment.transitions) {
    if (!IsValidState(tr.state)) return false;
  }
  return true;
}

bool SoccerEnv::IsTerminal(const StateVector& state,
                           const StateVector& next_state) const {
  return IsSuccessState(state) || !IsValidState(next_state);
}

StateVector SoccerEnv::SampleInitial(RngStream& rng) const {
  const Box2& f = params_.field;
  const double m = params_.spawn_margin;
  for (;;) {
    const Vec2 agent{rng.Uniform(f.lo.x + m, f.hi.x - m),
                     rng.Uniform(f.lo.y + m, f.hi.y - m)};
    const Vec2 ball{rng.Uniform(f.lo.x + m, f.hi.x - m),
                    rng.Uniform(f.lo.y + m, f.hi.y - m)};
    const double heading = kPi - 2.0 * kPi * rng.Uniform01();
    if ((agent - ball).Norm() >= params_.min_separation) {
      return {agent.x, agent.y, heading, ball.x, ball.y};
    }
  }
}

}  // namespace guda
