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

#include "guda/daf.h"

#include <cmath>

#include "guda/dataset_io.h"
#include "guda/error.h"

namespace guda {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void CheckGoal(const StateLayout& layout, const RelabelGoalParams& p) {
  if (layout.goal.empty()) throw DataError("no goal component");
  if (p.goal.size() != layout.goal.size()) {
    throw ConfigError("goal has " + std::to_string(p.goal.size()) +
                      " components, task expects " +
                      std::to_string(layout.goal.size()));
  }
}

}  // namespace

RotateParams MakeRotate(double phi, Vec2 pivot) {
  return {WrapAngle(phi), pivot};
}

ReflectParams MakeReflect(Vec2 point, Vec2 direction) {
  const double n = direction.Norm();
  if (!(n > 0.0)) throw ConfigError("reflection axis needs a nonzero direction");
  return {point, direction * (1.0 / n)};
}

void TransformState(const StateLayout& layout, const TransformParams& params,
                    StateVector& s) {
  std::visit(
      Overloaded{
          [&](const TranslateParams& p) {
            for (auto idx : layout.positions) SetVec(s, idx, GetVec(s, idx) + p.delta);
          },
          [&](const RotateParams& p) {
            if (p.phi == 0.0) return;
            const double c = std::cos(p.phi);
            const double sn = std::sin(p.phi);
            for (auto idx : layout.positions) {
              SetVec(s, idx, RotateVec(GetVec(s, idx) - p.pivot, c, sn) + p.pivot);
            }
            for (auto idx : layout.vectors) SetVec(s, idx, RotateVec(GetVec(s, idx), c, sn));
            for (int h : layout.headings) s[h] = WrapAngle(s[h] + p.phi);
          },
          [&](const ReflectParams& p) {
            const double axis_angle = p.direction.Angle();
            for (auto idx : layout.positions) {
              SetVec(s, idx, ReflectVec(GetVec(s, idx) - p.point, p.direction) + p.point);
            }
            for (auto idx : layout.vectors) {
              SetVec(s, idx, ReflectVec(GetVec(s, idx), p.direction));
            }
            for (int h : layout.headings) s[h] = WrapAngle(2.0 * axis_angle - s[h]);
          },
          [&](const RelabelGoalParams& p) {
            CheckGoal(layout, p);
            for (std::size_t i = 0; i < layout.goal.size(); ++i) {
              s[layout.goal[i]] = p.goal[i];
            }
          },
      },
      params);
}

void TransformAction(const StateLayout& layout, const TransformParams& params,
                     ActionVector& a) {
  std::visit(Overloaded{
                 [&](const TranslateParams&) {},
                 [&](const RotateParams& p) {
                   if (p.phi == 0.0) return;
                   const double c = std::cos(p.phi);
                   const double sn = std::sin(p.phi);
                   for (auto idx : layout.action_vectors) {
                     SetVec(a, idx, RotateVec(GetVec(a, idx), c, sn));
                   }
                 },
                 [&](const ReflectParams& p) {
                   for (auto idx : layout.action_vectors) {
                     SetVec(a, idx, ReflectVec(GetVec(a, idx), p.direction));
                   }
                   for (int i : layout.action_turn_rates) a[i] = -a[i];
                 },
                 [&](const RelabelGoalParams&) {},
             },
             params);
}

std::optional<TrajectorySegment> TryCompose(
    const TrajectorySegment& segment,
    const std::vector<TransformParams>& params, const Env& env) {
  if (params.empty()) throw ConfigError("compose needs at least one transform");
  const StateLayout& layout = env.layout();
  for (const auto& p : params) {
    if (const auto* g = std::get_if<RelabelGoalParams>(&p)) CheckGoal(layout, *g);
  }

  TrajectorySegment out = segment;
  for (auto& tr : out.transitions) {
    for (const auto& p : params) {
      TransformState(layout, p, tr.state);
      TransformAction(layout, p, tr.action);
      TransformState(layout, p, tr.next_state);
    }
  }
  RelabelRewardsAndTerminals(env, out);
  for (const auto& tr : out.transitions) {
    try {
      env.CheckAction(tr.action);
    } catch (const DataError&) {
      return std::nullopt;
    }
  }
  if (!env.IsValid(out)) return std::nullopt;
  return out;
}

AugmentedSegment Compose(const TrajectorySegment& segment,
                         const std::vector<TransformParams>& params,
                         const Env& env) {
  auto out = TryCompose(segment, params, env);
  if (!out) throw InvalidPlacement();
  AugmentedSegment aug;
  aug.segment = std::move(*out);
  aug.provenance.params = params;
  return aug;
}

AugmentedSegment Translate(const TrajectorySegment& segment, Vec2 delta,
                           const Env& env) {
  return Compose(segment, {TranslateParams{delta}}, env);
}

AugmentedSegment Rotate(const TrajectorySegment& segment, double phi,
                        Vec2 pivot, const Env& env) {
  return Compose(segment, {MakeRotate(phi, pivot)}, env);
}

AugmentedSegment Reflect(const TrajectorySegment& segment,
                         const ReflectParams& axis, const Env& env) {
  return Compose(segment, {MakeReflect(axis.point, axis.direction)}, env);
}

AugmentedSegment RelabelGoal(const TrajectorySegment& segment,
                             const StateVector& new_goal, const Env& env) {
  return Compose(segment, {RelabelGoalParams{new_goal}}, env);
}

std::string ParamsToJson(const TransformParams& params) {
  return std::visit(
      Overloaded{
          [](const TranslateParams& p) {
            return "{\"op\":\"translate\",\"delta\":[" + FormatReal(p.delta.x) +
                   "," + FormatReal(p.delta.y) + "]}";
          },
          [](const RotateParams& p) {
            return "{\"op\":\"rotate\",\"phi\":" + FormatReal(p.phi) +
                   ",\"pivot\":[" + FormatReal(p.pivot.x) + "," +
                   FormatReal(p.pivot.y) + "]}";
          },
          [](const ReflectParams& p) {
            return "{\"op\":\"reflect\",\"point\":[" + FormatReal(p.point.x) +
                   "," + FormatReal(p.point.y) + "],\"direction\":[" +
                   FormatReal(p.direction.x) + "," + FormatReal(p.direction.y) +
                   "]}";
          },
          [](const RelabelGoalParams& p) {
            std::string s = "{\"op\":\"relabel_goal\",\"goal\":";
            AppendRealArray(s, p.goal);
            return s + "}";
          },
      },
      params);
}

}  // namespace guda
