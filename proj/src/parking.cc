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

#include "guda/parking.h"

#include <algorithm>
#include <cmath>

namespace guda {

ParkingEnv::ParkingEnv(ParkingParams params) : params_(std::move(params)) {
  mdp_.state_dim = 7;
  mdp_.action_dim = 2;
  mdp_.gamma = 0.99;
  mdp_.horizon = params_.horizon;
  mdp_.action_low = {-1.0, -1.0};
  mdp_.action_high = {1.0, 1.0};
  layout_.positions = {{0, 1}};
  layout_.headings = {2};
  layout_.goal = {4, 5, 6};
  layout_.agent = 0;
  layout_.action_turn_rates = {1};
}

StateVector ParkingEnv::Step(const StateVector& state,
                             const ActionVector& action) const {
  CheckState(state);
  CheckAction(action);
  const double dt = params_.dt;
  const double theta = state[2];
  const double v = state[3];
  const double accel = action[0] * params_.max_accel;
  const double steer = action[1] * params_.max_steer;

  StateVector next = state;
  next[0] = state[0] + v * dt * std::cos(theta);
  next[1] = state[1] + v * dt * std::sin(theta);
  next[2] = WrapAngle(theta + (v / params_.wheelbase) * std::tan(steer) * dt);
  next[3] = std::clamp(v + accel * dt, -params_.v_max, params_.v_max);
  return next;
}

double ParkingEnv::Reward(const StateVector& state, const ActionVector&) const {
  const double dist = (Vec2{state[0], state[1]} - Vec2{state[4], state[5]}).Norm();
  const double heading_gap = 1.0 - std::cos(state[2] - state[6]);
  return -(params_.w_distance * dist + params_.w_heading * heading_gap);
}

bool ParkingEnv::IsValidState(const StateVector& state) const {
  if (static_cast<int>(state.size()) != mdp_.state_dim) return false;
  for (double x : state) {
    if (!std::isfinite(x)) return false;
  }
  return params_.lot.Contains({state[0], state[1]}) &&
         std::fabs(state[3]) <= params_.v_max + 1e-9;
}

bool ParkingEnv::IsSuccessState(const StateVector& state) const {
  const double dist = (Vec2{state[0], state[1]} - Vec2{state[4], state[5]}).Norm();
  return dist <= params_.position_tolerance &&
         AngleBetween(state[2], state[6]) <= params_.heading_tolerance;
}

bool ParkingEnv::IsSuccess(const TrajectorySegment& segment) const {
  return !segment.empty() && IsSuccessState(segment.back().state);
}

StateVector ParkingEnv::SampleInitial(RngStream& rng) const {
  const auto& spot = params_.spots[rng.UniformIndex(params_.spots.size())];
  return {params_.start_position.x, params_.start_position.y,
          params_.start_heading,    0.0,
          spot.position.x,          spot.position.y,
          spot.heading};
}

std::vector<StateVector> ParkingEnv::goal_choices() const {
  std::vector<StateVector> goals;
  for (const auto& s : params_.spots) {
    goals.push_back({s.position.x, s.position.y, s.heading});
  }
  return goals;
}

}  // namespace guda
