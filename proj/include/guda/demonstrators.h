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

#ifndef GUDA_DEMONSTRATORS_H_
#define GUDA_DEMONSTRATORS_H_

#include <cstdint>
#include <memory>

#include "guda/core_data.h"
#include "guda/env.h"
#include "guda/learner.h"
#include "guda/rng.h"

namespace guda {

// Suboptimality knobs of the scripted controllers.
struct DemoNoise {
  // Gaussian action noise, as a fraction of the action half-range.
  double action_sigma = 0.0;
  // Probability that an episode starts with a detour (a random waypoint in
  // the maze, a random steering phase for the car, a random walk in soccer).
  double detour_probability = 0.0;

  // A single noise level in [0, 1]: sigma = level / 2, detour = level.
  static DemoNoise FromLevel(double level);
};

// Scripted controller with per-episode state.
class Demonstrator {
 public:
  virtual ~Demonstrator() = default;
  virtual void Reset(const StateVector& initial, RngStream& rng) = 0;
  virtual ActionVector Act(const StateVector& state, RngStream& rng) = 0;
};

// Direction-field waypoint follower (maze), pursuit parker, turn-then-push
// dribbler (soccer). Throws ConfigError for an unknown environment type.
std::unique_ptr<Demonstrator> MakeDemonstrator(EnvPtr env, DemoNoise noise);

// Noise-free controller as a stateless policy.
Policy ExpertPolicy(EnvPtr env);

// Uniform random action, seeded from the state bits so the policy is
// stateless and reproducible.
Policy RandomPolicy(EnvPtr env, std::uint64_t seed);

// One episode until a terminal transition or the horizon.
TrajectorySegment RunDemoEpisode(const Env& env, Demonstrator& demo, RngStream rng);

// `episodes` demonstrations, at least one of them successful. Throws
// DataError if no success appears within 10 * episodes attempts.
Dataset GenerateDemos(EnvPtr env, int episodes, double noise, std::uint64_t seed);

}  // namespace guda

#endif  // GUDA_DEMONSTRATORS_H_
