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

#include "guda/core_data.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "guda/error.h"

namespace guda {

std::size_t Dataset::NumTransitions() const {
  std::size_t n = 0;
  for (const auto& ep : episodes) n += ep.size();
  return n;
}

bool ChainCheck(const TrajectorySegment& segment) {
  const auto& t = segment.transitions;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const StateVector& a = t[i].next_state;
    const StateVector& b = t[i + 1].state;
    if (a.size() != b.size() ||
        std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) != 0) {
      return false;
    }
  }
  return true;
}

bool TerminalCheck(const TrajectorySegment& segment) {
  const auto& t = segment.transitions;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (t[i].terminal) return false;
  }
  return true;
}

WindowRef SampleWindowRef(const Dataset& dataset, std::size_t k,
                          RngStream& rng) {
  const std::size_t total = dataset.NumTransitions();
  if (total == 0) throw DataError("no source data");

  // A uniformly drawn transition index picks its episode with probability
  // proportional to the episode length.
  std::uint64_t pick = rng.UniformIndex(total);
  std::size_t episode = 0;
  while (pick >= dataset.episodes[episode].size()) {
    pick -= dataset.episodes[episode].size();
    ++episode;
  }
  const std::size_t len = dataset.episodes[episode].size();
  const std::size_t window = (k == 0) ? len : std::min(k, len);
  const std::size_t starts = len - window + 1;
  const std::size_t start = rng.UniformIndex(starts);
  return {episode, start, window};
}

TrajectorySegment ExtractWindow(const Dataset& dataset, const WindowRef& ref) {
  const auto& src = dataset.episodes.at(ref.episode);
  TrajectorySegment out;
  out.task_id = src.task_id.empty() ? dataset.task_id : src.task_id;
  out.transitions.assign(src.transitions.begin() + ref.start,
                         src.transitions.begin() + ref.start + ref.length);
  return out;
}

TrajectorySegment SegmentWindow(const Dataset& dataset, std::size_t k,
                                RngStream& rng) {
  return ExtractWindow(dataset, SampleWindowRef(dataset, k, rng));
}

double DiscountedReturn(const TrajectorySegment& segment, double gamma) {
  double total = 0.0;
  double discount = 1.0;
  for (const auto& tr : segment.transitions) {
    total += discount * tr.reward;
    discount *= gamma;
  }
  return total;
}

double SegmentReturn(const TrajectorySegment& segment) {
  double total = 0.0;
  for (const auto& tr : segment.transitions) total += tr.reward;
  return total;
}

}  // namespace guda
