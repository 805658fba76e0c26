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

#ifndef GUDA_ENV_H_
#define GUDA_ENV_H_

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "guda/core_data.h"
#include "guda/rng.h"
#include "guda/vec2.h"

namespace guda {

using IndexPair = std::pair<int, int>;

// Describes which state/action components move under rigid transforms.
struct StateLayout {
  // Points in the plane: translated, rotated and reflected.
  std::vector<IndexPair> positions;
  // Free vectors (velocities): rotated and reflected only.
  std::vector<IndexPair> vectors;
  // Planar orientations in radians, wrapped to (-pi, pi].
  std::vector<int> headings;
  // Goal components replaced by goal relabeling and left alone by the
  // rigid transforms. Empty for tasks with a fixed goal.
  std::vector<int> goal;
  // Which entry of `positions` is the agent, and which is the manipulated
  // object (-1 when the task has none).
  int agent = 0;
  int object = -1;

  // Force-like action vectors: rotated and reflected.
  std::vector<IndexPair> action_vectors;
  // Turning-rate/steering actions: negated by reflections.
  std::vector<int> action_turn_rates;
};

struct Box2 {
  Vec2 lo;
  Vec2 hi;
  bool Contains(Vec2 p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
};

inline Vec2 GetVec(const StateVector& s, IndexPair idx) {
  return {s[idx.first], s[idx.second]};
}
inline void SetVec(StateVector& s, IndexPair idx, Vec2 v) {
  s[idx.first] = v.x;
  s[idx.second] = v.y;
}

// Deterministic task model: dynamics, true reward, validity and success
// predicates, initial-state distribution. Immutable after construction, so
// one instance can be shared across threads.
class Env {
 public:
  virtual ~Env() = default;

  virtual const std::string& task_id() const = 0;
  virtual const MdpSpec& mdp() const = 0;
  virtual const StateLayout& layout() const = 0;
  // Region all positions must stay inside.
  virtual Box2 bounds() const = 0;

  // Throws DataError("action bounds") for an out-of-range action.
  virtual StateVector Step(const StateVector& state,
                           const ActionVector& action) const = 0;
  virtual double Reward(const StateVector& state,
                        const ActionVector& action) const = 0;

  virtual bool IsValidState(const StateVector& state) const = 0;
  virtual bool IsSuccessState(const StateVector& state) const = 0;

  // Every state, including the final next state, satisfies IsValidState.
  virtual bool IsValid(const TrajectorySegment& segment) const;
  // Any visited state is a success state.
  virtual bool IsSuccess(const TrajectorySegment& segment) const;
  // Episode ends after the transition out of `state`.
  virtual bool IsTerminal(const StateVector& state,
                          const StateVector& next_state) const;

  virtual StateVector SampleInitial(RngStream& rng) const = 0;

  // Whether the segment stays far enough from obstacles for rigid motions to
  // commute with the dynamics. Tasks without obstacles always pass.
  virtual bool HasClearance(const TrajectorySegment&, double) const {
    return true;
  }

  virtual bool goal_conditioned() const { return false; }
  // Candidate goals for relabeling (goal-component values).
  virtual std::vector<StateVector> goal_choices() const { return {}; }

  // Throws DataError("action bounds") unless every component is within the
  // action box (plus a 1e-9 slack for rotated force vectors).
  void CheckAction(const ActionVector& action) const;
  void CheckState(const StateVector& state) const;

  // Uniform random action inside the bounds.
  ActionVector RandomAction(RngStream& rng) const;
};

using EnvPtr = std::shared_ptr<const Env>;

// Recomputes rewards and terminal flags from the environment and truncates
// after the first terminal transition.
void RelabelRewardsAndTerminals(const Env& env, TrajectorySegment& segment);

}  // namespace guda

#endif  // GUDA_ENV_H_
