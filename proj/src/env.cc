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

#include "guda/env.h"

#include <cmath>

#include "guda/error.h"

namespace guda {

namespace {
constexpr double kActionSlack = 1e-9;
}  // namespace

bool Env::IsValid(const TrajectorySegment& segment) const {
  for (const auto& tr : segment.transitions) {
    if (!IsValidState(tr.state)) return false;
  }
  return segment.empty() || IsValidState(segment.back().next_state);
}

bool Env::IsSuccess(const TrajectorySegment& segment) const {
  for (const auto& tr : segment.transitions) {
    if (IsSuccessState(tr.state)) return true;
  }
  return !segment.empty() && IsSuccessState(segment.back().next_state);
}

bool Env::IsTerminal(const StateVector& state, const StateVector&) const {
  return IsSuccessState(state);
}

void Env::CheckAction(const ActionVector& action) const {
  const auto& m = mdp();
  if (static_cast<int>(action.size()) != m.action_dim) {
    throw DataError("action bounds: expected " + std::to_string(m.action_dim) +
                    " components, got " + std::to_string(action.size()));
  }
  for (int i = 0; i < m.action_dim; ++i) {
    if (!(action[i] >= m.action_low[i] - kActionSlack &&
          action[i] <= m.action_high[i] + kActionSlack)) {
      throw DataError("action bounds: component " + std::to_string(i) + " = " +
                      std::to_string(action[i]));
    }
  }
}

void Env::CheckState(const StateVector& state) const {
  if (static_cast<int>(state.size()) != mdp().state_dim) {
    throw DataError("state dimension " + std::to_string(state.size()) +
                    " != " + std::to_string(mdp().state_dim));
  }
}

ActionVector Env::RandomAction(RngStream& rng) const {
  const auto& m = mdp();
  ActionVector a(m.action_dim);
  for (int i = 0; i < m.action_dim; ++i) {
    a[i] = rng.Uniform(m.action_low[i], m.action_high[i]);
  }
  return a;
}

void RelabelRewardsAndTerminals(const Env& env, TrajectorySegment& segment) {
  auto& t = segment.transitions;
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i].reward = env.Reward(t[i].state, t[i].action);
    t[i].terminal = env.IsTerminal(t[i].state, t[i].next_state);
    if (t[i].terminal) {
      t.resize(i + 1);
      break;
    }
  }
}

}  // namespace guda
