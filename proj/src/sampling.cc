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

#include "guda/sampling.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <thread>

#include "guda/env_registry.h"
#include "guda/error.h"

namespace guda {
namespace {

constexpr double kMinDisplacement = 1e-9;

Vec2 AgentPos(const Env& env, const StateVector& s) {
  return GetVec(s, env.layout().positions[env.layout().agent]);
}

// Net displacement of the agent over the segment.
Vec2 Displacement(const Env& env, const TrajectorySegment& seg) {
  return AgentPos(env, seg.back().next_state) - AgentPos(env, seg.front().state);
}

double UniformAngle(RngStream& rng) { return kPi - 2.0 * kPi * rng.Uniform01(); }

// Isotropic Gaussian offset with its norm truncated at `width`.
Vec2 RadialNoise(double sigma, double width, RngStream& rng) {
  if (sigma <= 0.0) return {};
  for (;;) {
    const Vec2 n{rng.Normal(0.0, sigma), rng.Normal(0.0, sigma)};
    if (n.Norm() <= width) return n;
  }
}

Vec2 AnchorInCell(Cell c, double margin, RngStream& rng) {
  return {c.col + rng.Uniform(margin, 1.0 - margin),
          c.row + rng.Uniform(margin, 1.0 - margin)};
}

// Direction the guided maze rules align with: the shortest-path field, or
// straight at the goal inside the goal cell.
std::optional<Vec2> GuideDirection(const PointMassMaze& env, Cell cell,
                                   Vec2 anchor) {
  const Vec2 d = env.field().Direction(cell);
  if (d.Norm() > 0.0) return d;
  const Vec2 to_goal = env.spec().goal() - anchor;
  if (to_goal.Norm() < kMinDisplacement) return std::nullopt;
  return to_goal;
}

std::optional<AugmentedSegment> Accept(const TrajectorySegment& segment,
                                       std::vector<TransformParams> params,
                                       const Env& env,
                                       const AugmentationRule& rule) {
  auto out = TryCompose(segment, params, env);
  if (!out || !env.HasClearance(*out, rule.min_clearance)) return std::nullopt;
  AugmentedSegment aug;
  aug.segment = std::move(*out);
  aug.provenance.params = std::move(params);
  return aug;
}

template <class T>
const T& As(const Env& env, RuleKind kind) {
  const auto* p = dynamic_cast<const T*>(&env);
  if (p == nullptr) {
    throw ConfigError("rule " + RuleName(kind) + " does not apply to task '" +
                      env.task_id() + "'");
  }
  return *p;
}

}  // namespace

std::string RuleName(RuleKind kind) {
  switch (kind) {
    case RuleKind::kRandomDA:
      return "random";
    case RuleKind::kGuidedMaze2d:
      return "guided-maze2d";
    case RuleKind::kGuidedAntmazeStyle:
      return "guided-antmaze";
    case RuleKind::kGuidedParking:
      return "guided-parking";
    case RuleKind::kGuidedSoccer:
      return "guided-soccer";
  }
  return "unknown";
}

RuleKind ParseRuleKind(const std::string& name) {
  for (RuleKind k : {RuleKind::kRandomDA, RuleKind::kGuidedMaze2d,
                     RuleKind::kGuidedAntmazeStyle, RuleKind::kGuidedParking,
                     RuleKind::kGuidedSoccer}) {
    if (RuleName(k) == name) return k;
  }
  throw ConfigError("unknown augmentation rule '" + name + "'");
}

void AugmentationRule::Validate() const {
  if (!(angular_sigma >= 0.0) || !(positional_sigma >= 0.0)) {
    throw ConfigError("noise sigmas must be non-negative");
  }
  if (!(truncation > 0.0)) throw ConfigError("truncation must be positive");
  if (max_retries < 1) throw ConfigError("max_retries must be at least 1");
  if (rotation_trials < 1) throw ConfigError("rotation_trials must be at least 1");
  if (!(reflect_probability >= 0.0 && reflect_probability <= 1.0)) {
    throw ConfigError("reflect_probability must lie in [0, 1]");
  }
}

AugmentationRule DefaultRule(const std::string& task, const std::string& strategy) {
  const TaskFamily family = FamilyOf(task);
  AugmentationRule rule;
  const bool maze = family == TaskFamily::kMaze || family == TaskFamily::kAntmaze;
  rule.k = maze ? 16 : 0;
  if (strategy == "random") {
    rule.kind = RuleKind::kRandomDA;
    return rule;
  }
  if (strategy != "guda") {
    throw ConfigError("no augmentation rule for strategy '" + strategy + "'");
  }
  switch (family) {
    case TaskFamily::kMaze:
      rule.kind = RuleKind::kGuidedMaze2d;
      break;
    case TaskFamily::kAntmaze:
      rule.kind = RuleKind::kGuidedAntmazeStyle;
      break;
    case TaskFamily::kParking:
      rule.kind = RuleKind::kGuidedParking;
      // Truncated heading noise (2 sigma) stays inside the 0.26 rad
      // parking tolerance.
      rule.angular_sigma = 0.1;
      break;
    case TaskFamily::kSoccer:
      rule.kind = RuleKind::kGuidedSoccer;
      rule.positional_sigma = 0.0;
      break;
  }
  return rule;
}

AugmentedSegment SampleRandom(const TrajectorySegment& segment, const Env& env,
                              const AugmentationRule& rule, RngStream& rng) {
  const Box2 box = env.bounds();
  const Vec2 start = AgentPos(env, segment.front().state);
  const auto goals = env.goal_choices();
  for (int attempt = 0; attempt < rule.max_retries; ++attempt) {
    std::vector<TransformParams> params;
    if (env.goal_conditioned() && !goals.empty()) {
      params.push_back(RelabelGoalParams{goals[rng.UniformIndex(goals.size())]});
    }
    const Vec2 anchor{rng.Uniform(box.lo.x, box.hi.x),
                      rng.Uniform(box.lo.y, box.hi.y)};
    params.push_back(TranslateParams{anchor - start});
    params.push_back(MakeRotate(UniformAngle(rng), anchor));
    if (rng.Bernoulli(0.5)) params.push_back(MakeReflect(anchor, {1.0, 0.0}));
    if (auto aug = Accept(segment, std::move(params), env, rule)) return *aug;
  }
  throw RejectionExhausted(RuleName(rule.kind));
}

AugmentedSegment SampleGuidedMaze(const TrajectorySegment& segment,
                                  const PointMassMaze& env,
                                  const AugmentationRule& rule, RngStream& rng) {
  const Vec2 disp = Displacement(env, segment);
  if (disp.Norm() < kMinDisplacement) throw RejectionExhausted(RuleName(rule.kind));
  const Vec2 start = AgentPos(env, segment.front().state);
  const auto& cells = env.spec().open_cells();
  const double margin = env.params().half_size + rule.min_clearance;
  const double sigma = rule.angular_sigma;
  // Retries move the anchor only, so acceptance does not reshape the noise.
  const double noise = rng.TruncatedNormal(0.0, sigma, rule.truncation * sigma);
  for (int attempt = 0; attempt < rule.max_retries; ++attempt) {
    const Cell cell = cells[rng.UniformIndex(cells.size())];
    const Vec2 anchor = AnchorInCell(cell, margin, rng);
    const auto guide = GuideDirection(env, cell, anchor);
    if (!guide) continue;
    const double phi = WrapAngle(guide->Angle() + noise - disp.Angle());
    std::vector<TransformParams> params = {TranslateParams{anchor - start},
                                           MakeRotate(phi, anchor)};
    if (auto aug = Accept(segment, std::move(params), env, rule)) return *aug;
  }
  throw RejectionExhausted(RuleName(rule.kind));
}

AugmentedSegment SampleGuidedAntmazeStyle(const TrajectorySegment& segment,
                                          const PointMassMaze& env,
                                          const AugmentationRule& rule,
                                          RngStream& rng) {
  const Vec2 disp = Displacement(env, segment);
  if (disp.Norm() < kMinDisplacement) throw RejectionExhausted(RuleName(rule.kind));
  const Vec2 start = AgentPos(env, segment.front().state);
  const auto& cells = env.spec().open_cells();
  const double margin = env.params().half_size + rule.min_clearance;
  for (int attempt = 0; attempt < rule.max_retries; ++attempt) {
    const Cell cell = cells[rng.UniformIndex(cells.size())];
    const Vec2 anchor = AnchorInCell(cell, margin, rng);
    const auto guide = GuideDirection(env, cell, anchor);
    if (!guide || AngleBetween(disp.Angle(), guide->Angle()) > rule.align_threshold) {
      continue;
    }
    if (auto aug = Accept(segment, {TranslateParams{anchor - start}}, env, rule)) {
      return *aug;
    }
  }
  throw RejectionExhausted(RuleName(rule.kind));
}

AugmentedSegment SampleGuidedParking(const TrajectorySegment& segment,
                                     const ParkingEnv& env,
                                     const AugmentationRule& rule,
                                     RngStream& rng) {
  const auto goals = env.goal_choices();
  const StateVector& last = segment.back().state;
  const Vec2 final_pos{last[0], last[1]};
  const double final_heading = last[2];
  const double sp = rule.positional_sigma;
  const double sa = rule.angular_sigma;
  for (int attempt = 0; attempt < rule.max_retries; ++attempt) {
    const StateVector& goal = goals[rng.UniformIndex(goals.size())];
    const Vec2 target = Vec2{goal[0], goal[1]} + RadialNoise(sp, rule.truncation * sp, rng);
    const double heading = goal[2] + rng.TruncatedNormal(0.0, sa, rule.truncation * sa);
    std::vector<TransformParams> params = {
        RelabelGoalParams{goal}, TranslateParams{target - final_pos},
        MakeRotate(heading - final_heading, target)};
    if (auto aug = Accept(segment, std::move(params), env, rule)) return *aug;
  }
  throw RejectionExhausted(RuleName(rule.kind));
}

AugmentedSegment SampleGuidedSoccer(const TrajectorySegment& segment,
                                    const SoccerEnv& env,
                                    const AugmentationRule& rule,
                                    RngStream& rng) {
  const StateLayout& layout = env.layout();
  const Vec2 final_ball = GetVec(segment.back().state, layout.positions[layout.object]);
  const Vec2 goal = env.goal_center();
  const double sp = rule.positional_sigma;
  const Vec2 target = goal + RadialNoise(sp, rule.truncation * sp, rng);
  const TranslateParams shift{target - final_ball};
  for (int trial = 0; trial < rule.rotation_trials; ++trial) {
    std::vector<TransformParams> params = {shift, MakeRotate(UniformAngle(rng), target)};
    auto placed = TryCompose(segment, params, env);
    // A segment cut short by an earlier goal no longer ends at the target.
    if (!placed || placed->size() != segment.size()) continue;
    if (rng.Bernoulli(rule.reflect_probability)) {
      params.push_back(MakeReflect(goal, {1.0, 0.0}));
    }
    if (auto aug = Accept(segment, std::move(params), env, rule)) {
      if (aug->segment.size() == segment.size()) return *aug;
    }
  }
  throw RejectionExhausted(RuleName(rule.kind));
}

AugmentedSegment SampleAugmentation(const TrajectorySegment& segment,
                                    const Env& env,
                                    const AugmentationRule& rule,
                                    RngStream& rng) {
  if (segment.empty()) throw DataError("cannot augment an empty segment");
  switch (rule.kind) {
    case RuleKind::kRandomDA:
      return SampleRandom(segment, env, rule, rng);
    case RuleKind::kGuidedMaze2d:
      return SampleGuidedMaze(segment, As<PointMassMaze>(env, rule.kind), rule, rng);
    case RuleKind::kGuidedAntmazeStyle:
      return SampleGuidedAntmazeStyle(segment, As<PointMassMaze>(env, rule.kind),
                                      rule, rng);
    case RuleKind::kGuidedParking:
      return SampleGuidedParking(segment, As<ParkingEnv>(env, rule.kind), rule, rng);
    case RuleKind::kGuidedSoccer:
      return SampleGuidedSoccer(segment, As<SoccerEnv>(env, rule.kind), rule, rng);
  }
  throw ConfigError("unknown rule");
}

namespace {

struct WindowOutcome {
  WindowRef ref;
  std::optional<AugmentedSegment> aug;
};

WindowOutcome RunWindow(const AugmentationJob& job, const Env& env,
                        std::uint64_t index) {
  RngStream rng(job.master_seed, index);
  WindowOutcome out;
  out.ref = SampleWindowRef(*job.source, job.rule.k, rng);
  const TrajectorySegment window = ExtractWindow(*job.source, out.ref);
  try {
    out.aug = SampleAugmentation(window, env, job.rule, rng);
    out.aug->provenance.source_episode = out.ref.episode;
    out.aug->provenance.window_start = out.ref.start;
  } catch (const RejectionExhausted&) {
    out.aug.reset();
  }
  return out;
}

std::string ProvenanceJson(const Provenance& p) {
  std::string s = "{\"episode\":" + std::to_string(p.source_episode) +
                  ",\"start\":" + std::to_string(p.window_start) + ",\"params\":[";
  for (std::size_t i = 0; i < p.params.size(); ++i) {
    if (i) s += ',';
    s += ParamsToJson(p.params[i]);
  }
  return s + "]}";
}

}  // namespace

Dataset BuildAugmentedDataset(const AugmentationJob& job, const Env& env,
                              AugmentationStats* stats_out) {
  if (job.source == nullptr) throw ConfigError("augmentation job has no source");
  job.rule.Validate();
  const Dataset& source = *job.source;
  if (source.empty()) throw DataError("no source data");

  Dataset out;
  out.task_id = source.task_id;
  out.episodes = source.episodes;
  out.metadata.source = DatasetSource::kAugmented;
  out.metadata.seed = job.master_seed;
  out.metadata.rule = RuleName(job.rule.kind);

  AugmentationStats stats;
  std::string provenance;
  constexpr std::uint64_t kBlock = 256;
  const int workers = std::max(1, job.workers);
  std::uint64_t next_index = 0;
  std::size_t consecutive_failures = 0;

  while (stats.augmented_transitions < job.n) {
    std::vector<WindowOutcome> block(kBlock);
    const std::uint64_t base = next_index;
    auto work = [&](int w) {
      for (std::uint64_t i = w; i < kBlock; i += workers) {
        block[i] = RunWindow(job, env, base + i);
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (auto& t : pool) t.join();
    }
    next_index += kBlock;

    for (auto& outcome : block) {
      ++stats.windows_tried;
      if (!outcome.aug) {
        ++stats.windows_rejected;
        if (++consecutive_failures >= job.max_window_failures) {
          throw DataError("rule " + RuleName(job.rule.kind) +
                          ": persistent rejection failure after " +
                          std::to_string(consecutive_failures) + " windows");
        }
        continue;
      }
      consecutive_failures = 0;
      if (!provenance.empty()) provenance += ',';
      provenance += ProvenanceJson(outcome.aug->provenance);
      stats.augmented_transitions += outcome.aug->segment.size();
      ++stats.augmented_episodes;
      outcome.aug->segment.task_id = out.task_id;
      out.episodes.push_back(std::move(outcome.aug->segment));
      if (stats.augmented_transitions >= job.n) break;
    }
  }

  out.metadata.extra_json =
      "{\"n_target\":" + std::to_string(job.n) +
      ",\"demo_episodes\":" + std::to_string(source.episodes.size()) +
      ",\"demo_transitions\":" + std::to_string(source.NumTransitions()) +
      ",\"augmented_episodes\":" + std::to_string(stats.augmented_episodes) +
      ",\"augmented_transitions\":" + std::to_string(stats.augmented_transitions) +
      ",\"windows_tried\":" + std::to_string(stats.windows_tried) +
      ",\"windows_rejected\":" + std::to_string(stats.windows_rejected) +
      ",\"k\":" + std::to_string(job.rule.k) + ",\"provenance\":[" + provenance + "]}";
  if (stats_out) *stats_out = stats;
  return out;
}

}  // namespace guda
