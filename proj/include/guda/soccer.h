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

#ifndef GUDA_SOCCER_H_
#define GUDA_SOCCER_H_

#include <string>

#include "guda/env.h"

namespace guda {

struct SoccerParams {
  double dt = 0.1;
  double agent_speed = 1.5;
  double turn_rate = 2.0;
  double agent_radius = 0.3;
  double ball_radius = 0.2;
  // Field rectangle; the goal mouth sits on the +x end line.
  Box2 field{{-4.5, -3.0}, {4.5, 3.0}};
  double goal_half_width = 0.75;
  double goal_depth = 0.5;
  double w_agent_ball = 0.3;
  double w_ball_goal = 1.0;
  double goal_bonus = 50.0;
  double min_separation = 1.0;
  // Inset from the field edge for initial placements.
  double spawn_margin = 0.5;
  int horizon = 300;
};

// Planar agent that dribbles a ball into a fixed goal.
//   state  = [agent_x, agent_y, agent_heading, ball_x, ball_y]
//   action = [forward, turn] in [-1, 1]^2 (unicycle).
// The ball moves only when the agent disc overlaps it, and is then pushed
// radially out to contact distance.
class SoccerEnv : public Env {
 public:
  explicit SoccerEnv(SoccerParams params = {});

  const std::string& task_id() const override { return task_id_; }
  const MdpSpec& mdp() const override { return mdp_; }
  const StateLayout& layout() const override { return layout_; }
  Box2 bounds() const override { return params_.field; }

  StateVector Step(const StateVector& state,
                   const ActionVector& action) const override;
  double Reward(const StateVector& state,
                const ActionVector& action) const override;
  // Agent inside the field, ball inside the field or the goal box.
  bool IsValidState(const StateVector& state) const override;
  bool IsSuccessState(const StateVector& state) const override;
  // All states before the final next state must be in bounds; the final one
  // may be out (the episode-ending kick out of bounds).
  bool IsValid(const TrajectorySegment& segment) const override;
  // Ends on a goal or when the next state leaves the field.
  bool IsTerminal(const StateVector& state,
                  const StateVector& next_state) const override;
  StateVector SampleInitial(RngStream& rng) const override;

  Vec2 goal_center() const { return {params_.field.hi.x, 0.0}; }
  bool BallInGoal(Vec2 ball) const;
  const SoccerParams& params() const { return params_; }

 private:
  std::string task_id_ = "soccer";
  SoccerParams params_;
  MdpSpec mdp_;
  StateLayout layout_;
};

}  // namespace guda

#endif  // GUDA_SOCCER_H_
