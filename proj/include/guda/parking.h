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

#ifndef GUDA_PARKING_H_
#define GUDA_PARKING_H_

#include <string>
#include <vector>

#include "guda/env.h"

namespace guda {

struct ParkingSpot {
  Vec2 position;
  double heading = 0.0;
};

struct ParkingParams {
  double dt = 0.1;
  double wheelbase = 1.0;
  double v_max = 2.0;
  double max_accel = 2.0;
  double max_steer = 0.6;
  double w_distance = 1.0;
  double w_heading = 0.5;
  double position_tolerance = 0.25;
  double heading_tolerance = 0.26;
  int horizon = 100;
  Box2 lot{{-10.0, -4.0}, {10.0, 9.0}};
  Vec2 start_position{0.0, 0.0};
  double start_heading = kPi / 2.0;
  // Spots face +y (front-first parking) along one row.
  std::vector<ParkingSpot> spots = {{{-4.0, 6.0}, kPi / 2.0},
                                    {{-2.0, 6.0}, kPi / 2.0},
                                    {{0.0, 6.0}, kPi / 2.0},
                                    {{2.0, 6.0}, kPi / 2.0},
                                    {{4.0, 6.0}, kPi / 2.0}};
};

// Kinematic bicycle car parking into a goal spot (goal-conditioned).
//   state  = [px, py, heading, speed, goal_x, goal_y, goal_heading]
//   action = [accel, steer] in [-1, 1]^2, scaled by max_accel / max_steer.
// Dense reward: -(w_d |p - p_spot| + w_h (1 - cos(heading - spot heading))).
class ParkingEnv : public Env {
 public:
  explicit ParkingEnv(ParkingParams params = {});

  const std::string& task_id() const override { return task_id_; }
  const MdpSpec& mdp() const override { return mdp_; }
  const StateLayout& layout() const override { return layout_; }
  Box2 bounds() const override { return params_.lot; }

  StateVector Step(const StateVector& state,
                   const ActionVector& action) const override;
  double Reward(const StateVector& state,
                const ActionVector& action) const override;
  bool IsValidState(const StateVector& state) const override;
  bool IsSuccessState(const StateVector& state) const override;
  // Judged on the pose of the last transition's state.
  bool IsSuccess(const TrajectorySegment& segment) const override;
  StateVector SampleInitial(RngStream& rng) const override;

  bool goal_conditioned() const override { return true; }
  std::vector<StateVector> goal_choices() const override;

  const ParkingParams& params() const { return params_; }

 private:
  std::string task_id_ = "parking";
  ParkingParams params_;
  MdpSpec mdp_;
  StateLayout layout_;
};

}  // namespace guda

#endif  // GUDA_PARKING_H_
