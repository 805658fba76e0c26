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

#ifndef GUDA_SAMPLING_H_
#define GUDA_SAMPLING_H_

#include <cstddef>
#include <cstdint>
#include <string>

#include "guda/core_data.h"
#include "guda/daf.h"
#include "guda/env.h"
#include "guda/maze.h"
#include "guda/parking.h"
#include "guda/rng.h"
#include "guda/soccer.h"

namespace guda {

enum class RuleKind {
  kRandomDA,
  kGuidedMaze2d,
  kGuidedAntmazeStyle,
  kGuidedParking,
  kGuidedSoccer,
};

std::string RuleName(RuleKind kind);
RuleKind ParseRuleKind(const std::string& name);

// How transform parameters are drawn for each source window.
struct AugmentationRule {
  RuleKind kind = RuleKind::kRandomDA;
  // Gaussian noise on guided rotations (radians) and anchor positions.
  double angular_sigma = 0.2;
  double positional_sigma = 0.1;
  // Noise is truncated at +-truncation * sigma.
  double truncation = 2.0;
  // Window length; 0 takes whole episodes.
  std::size_t k = 16;
  // Placement attempts per source window.
  int max_retries = 100;
  // Swept-path clearance from maze walls for every placed segment.
  double min_clearance = 0.1;
  // Translate-only maze rule: largest accepted angle between the segment's
  // displacement and the shortest-path direction at the anchor.
  double align_threshold = 0.52;
  // Soccer: uniformly drawn rotation angles tried for an in-bounds fit.
  int rotation_trials = 200;
  double reflect_probability = 0.5;

  void Validate() const;
};

// Defaults for a task and strategy ("guda" or "random").
AugmentationRule DefaultRule(const std::string& task, const std::string& strategy);

// Random DA baseline: anchor uniform in the task bounds, rotation uniform in
// (-pi, pi], reflection with probability 1/2, goal uniform over the choices
// for goal-conditioned tasks. Throws RejectionExhausted after max_retries
// invalid placements.
AugmentedSegment SampleRandom(const TrajectorySegment& segment, const Env& env,
                              const AugmentationRule& rule, RngStream& rng);

// Translate the first state to a random open-cell position, then rotate
// about it so the net displacement follows the shortest-path direction plus
// truncated Gaussian noise.
AugmentedSegment SampleGuidedMaze(const TrajectorySegment& segment,
                                  const PointMassMaze& env,
                                  const AugmentationRule& rule, RngStream& rng);

// Translate-only: accept anchors where the unrotated displacement is within
// align_threshold of the shortest-path direction.
AugmentedSegment SampleGuidedAntmazeStyle(const TrajectorySegment& segment,
                                          const PointMassMaze& env,
                                          const AugmentationRule& rule,
                                          RngStream& rng);

// Relabel to a random spot, translate the final car position onto it (plus
// noise) and rotate about it so the final heading matches the spot.
AugmentedSegment SampleGuidedParking(const TrajectorySegment& segment,
                                     const ParkingEnv& env,
                                     const AugmentationRule& rule,
                                     RngStream& rng);

// Translate the final ball position onto the goal centre, rotate about it by
// a random in-bounds angle, then reflect across the long axis with
// probability reflect_probability.
AugmentedSegment SampleGuidedSoccer(const TrajectorySegment& segment,
                                    const SoccerEnv& env,
                                    const AugmentationRule& rule,
                                    RngStream& rng);

// Dispatches on rule.kind; throws ConfigError if the rule does not fit env.
AugmentedSegment SampleAugmentation(const TrajectorySegment& segment,
                                    const Env& env,
                                    const AugmentationRule& rule,
                                    RngStream& rng);

struct AugmentationJob {
  const Dataset* source = nullptr;
  AugmentationRule rule;
  // Target augmented-transition count; 0 returns the demonstrations only.
  std::size_t n = 0;
  std::uint64_t master_seed = 0;
  // Parallel window workers; the output does not depend on this.
  int workers = 1;
  // Consecutive rejected windows tolerated before giving up.
  std::size_t max_window_failures = 2000;
};

struct AugmentationStats {
  std::size_t windows_tried = 0;
  std::size_t windows_rejected = 0;
  std::size_t augmented_episodes = 0;
  std::size_t augmented_transitions = 0;
};

// Demonstrations verbatim followed by augmented episodes, stopping after
// the episode that reaches n augmented transitions. Window w draws from
// RngStream(master_seed, w), so the output depends only on the job.
Dataset BuildAugmentedDataset(const AugmentationJob& job, const Env& env,
                              AugmentationStats* stats = nullptr);

}  // namespace guda

#endif  // GUDA_SAMPLING_H_
