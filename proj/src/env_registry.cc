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

#include "guda/env_registry.h"

#include <algorithm>
#include <functional>
#include <memory>

#include "guda/error.h"
#include "guda/maze.h"
#include "guda/parking.h"
#include "guda/soccer.h"

namespace guda {
namespace {

using Setter = std::function<void(double)>;

void ApplyOverrides(const std::string& task,
                    const std::map<std::string, double>& constants,
                    const std::map<std::string, Setter>& setters) {
  for (const auto& [key, value] : constants) {
    auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("task '" + task + "' has no constant '" + key + "'");
    }
    it->second(value);
  }
}

std::string LayoutName(const std::string& task) {
  return task.substr(task.find('-') + 1);
}

// Open cell farthest from the goal; first in scan order on ties.
Cell FarthestCell(const MazeSpec& spec) {
  const PathField field = ShortestPathField(spec);
  Cell best = spec.open_cells().front();
  for (Cell c : spec.open_cells()) {
    if (field.Distance(c) > field.Distance(best)) best = c;
  }
  return best;
}

}  // namespace

const std::vector<std::string>& RegisteredTasks() {
  static const std::vector<std::string> tasks = {
      "maze-umaze",    "maze-medium",    "maze-large",    "maze-open",
      "antmaze-umaze", "antmaze-medium", "antmaze-large", "parking",
      "soccer"};
  return tasks;
}

bool IsRegisteredTask(const std::string& task) {
  const auto& t = RegisteredTasks();
  return std::find(t.begin(), t.end(), task) != t.end();
}

TaskFamily FamilyOf(const std::string& task) {
  if (!IsRegisteredTask(task)) throw ConfigError("unknown task '" + task + "'");
  if (task.rfind("maze-", 0) == 0) return TaskFamily::kMaze;
  if (task.rfind("antmaze-", 0) == 0) return TaskFamily::kAntmaze;
  if (task == "parking") return TaskFamily::kParking;
  return TaskFamily::kSoccer;
}

EnvPtr MakeEnv(const std::string& task, const EnvOptions& options) {
  const TaskFamily family = FamilyOf(task);
  switch (family) {
    case TaskFamily::kMaze:
    case TaskFamily::kAntmaze: {
      PointMassParams p;
      ApplyOverrides(task, options.constants,
                     {{"dt", [&](double v) { p.dt = v; }},
                      {"friction", [&](double v) { p.friction = v; }},
                      {"v_max", [&](double v) { p.v_max = v; }},
                      {"max_force", [&](double v) { p.max_force = v; }},
                      {"half_size", [&](double v) { p.half_size = v; }},
                      {"goal_radius", [&](double v) { p.goal_radius = v; }},
                      {"horizon", [&](double v) { p.horizon = static_cast<int>(v); }},
                      {"start_jitter", [&](double v) { p.start_jitter = v; }}});
      MazeSpec spec = options.maze_layout_path.empty()
                          ? MazeSpec::Builtin(LayoutName(task))
                          : MazeSpec::FromFile(options.maze_layout_path);
      if (family == TaskFamily::kAntmaze) {
        spec = spec.WithStartCells({FarthestCell(spec)});
      }
      return std::make_shared<PointMassMaze>(task, std::move(spec), p);
    }
    case TaskFamily::kParking: {
      ParkingParams p;
      ApplyOverrides(task, options.constants,
                     {{"dt", [&](double v) { p.dt = v; }},
                      {"wheelbase", [&](double v) { p.wheelbase = v; }},
                      {"v_max", [&](double v) { p.v_max = v; }},
                      {"max_accel", [&](double v) { p.max_accel = v; }},
                      {"max_steer", [&](double v) { p.max_steer = v; }},
                      {"w_distance", [&](double v) { p.w_distance = v; }},
                      {"w_heading", [&](double v) { p.w_heading = v; }},
                      {"horizon", [&](double v) { p.horizon = static_cast<int>(v); }}});
      return std::make_shared<ParkingEnv>(std::move(p));
    }
    case TaskFamily::kSoccer: {
      SoccerParams p;
      ApplyOverrides(task, options.constants,
                     {{"dt", [&](double v) { p.dt = v; }},
                      {"agent_speed", [&](double v) { p.agent_speed = v; }},
                      {"turn_rate", [&](double v) { p.turn_rate = v; }},
                      {"agent_radius", [&](double v) { p.agent_radius = v; }},
                      {"ball_radius", [&](double v) { p.ball_radius = v; }},
                      {"w_agent_ball", [&](double v) { p.w_agent_ball = v; }},
                      {"w_ball_goal", [&](double v) { p.w_ball_goal = v; }},
                      {"goal_bonus", [&](double v) { p.goal_bonus = v; }},
                      {"horizon", [&](double v) { p.horizon = static_cast<int>(v); }}});
      return std::make_shared<SoccerEnv>(p);
    }
  }
  throw ConfigError("unknown task '" + task + "'");
}

}  // namespace guda
