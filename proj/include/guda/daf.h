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

#ifndef GUDA_DAF_H_
#define GUDA_DAF_H_

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "guda/core_data.h"
#include "guda/env.h"
#include "guda/vec2.h"

namespace guda {

// Data augmentation functions: deterministic rigid transforms and goal
// relabeling of trajectory segments. All randomness is in the parameters,
// which the samplers draw.

struct TranslateParams {
  Vec2 delta;
};

struct RotateParams {
  double phi = 0.0;  // wrapped to (-pi, pi]
  Vec2 pivot;
};

// Reflection across the line through `point` with unit `direction`.
struct ReflectParams {
  Vec2 point;
  Vec2 direction{1.0, 0.0};
};

struct RelabelGoalParams {
  StateVector goal;
};

using TransformParams =
    std::variant<TranslateParams, RotateParams, ReflectParams, RelabelGoalParams>;

RotateParams MakeRotate(double phi, Vec2 pivot);
// Normalizes the direction; throws ConfigError for a zero vector.
ReflectParams MakeReflect(Vec2 point, Vec2 direction);

struct Provenance {
  std::size_t source_episode = 0;
  std::size_t window_start = 0;
  std::vector<TransformParams> params;
};

struct AugmentedSegment {
  TrajectorySegment segment;
  Provenance provenance;
};

// Applies one transform to a state or action.
void TransformState(const StateLayout& layout, const TransformParams& params,
                    StateVector& state);
void TransformAction(const StateLayout& layout, const TransformParams& params,
                     ActionVector& action);

// Applies the transforms in order to every state, action and next state,
// then recomputes rewards and terminal flags once (truncating after the
// first terminal transition) and checks validity. Returns nullopt when the
// result fails Env::IsValid or an action leaves the action box.
std::optional<TrajectorySegment> TryCompose(
    const TrajectorySegment& segment,
    const std::vector<TransformParams>& params, const Env& env);

// Throwing forms. InvalidPlacement on validity failure; ConfigError for an
// empty parameter list; DataError("no goal component") when relabeling a
// task without goal components.
AugmentedSegment Compose(const TrajectorySegment& segment,
                         const std::vector<TransformParams>& params,
                         const Env& env);
AugmentedSegment Translate(const TrajectorySegment& segment, Vec2 delta,
                           const Env& env);
AugmentedSegment Rotate(const TrajectorySegment& segment, double phi,
                        Vec2 pivot, const Env& env);
AugmentedSegment Reflect(const TrajectorySegment& segment,
                         const ReflectParams& axis, const Env& env);
AugmentedSegment RelabelGoal(const TrajectorySegment& segment,
                             const StateVector& new_goal, const Env& env);

// JSON text for one parameter record, used in dataset provenance.
std::string ParamsToJson(const TransformParams& params);

}  // namespace guda

#endif  // GUDA_DAF_H_
