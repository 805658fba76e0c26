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

#ifndef GUDA_ENV_REGISTRY_H_
#define GUDA_ENV_REGISTRY_H_

#include <map>
#include <string>
#include <vector>

#include "guda/env.h"

namespace guda {

enum class TaskFamily { kMaze, kAntmaze, kParking, kSoccer };

struct EnvOptions {
  // Physics/reward constant overrides by name, e.g. {"dt", 0.05}.
  std::map<std::string, double> constants;
  // Replaces the built-in maze layout for maze tasks.
  std::string maze_layout_path;
};

// Registered tasks:
//   maze-umaze, maze-medium, maze-large, maze-open   random start cell
//   antmaze-umaze, antmaze-medium, antmaze-large     fixed start cell
//   parking, soccer
const std::vector<std::string>& RegisteredTasks();
bool IsRegisteredTask(const std::string& task);
TaskFamily FamilyOf(const std::string& task);

EnvPtr MakeEnv(const std::string& task, const EnvOptions& options = {});

}  // namespace guda

#endif  // GUDA_ENV_REGISTRY_H_
