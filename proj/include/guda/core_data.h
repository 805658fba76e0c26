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

#ifndef GUDA_CORE_DATA_H_
#define GUDA_CORE_DATA_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "guda/rng.h"

namespace guda {

using StateVector = std::vector<double>;
using ActionVector = std::vector<double>;

struct Transition {
  StateVector state;
  ActionVector action;
  double reward = 0.0;
  StateVector next_state;
  bool terminal = false;

  bool operator==(const Transition&) const = default;
};

struct TrajectorySegment {
  std::vector<Transition> transitions;
  std::string task_id;

  std::size_t size() const { return transitions.size(); }
  bool empty() const { return transitions.empty(); }
  const Transition& front() const { return transitions.front(); }
  const Transition& back() const { return transitions.back(); }

  bool operator==(const TrajectorySegment&) const = default;
};

struct MdpSpec {
  int state_dim = 0;
  int action_dim = 0;
  double gamma = 0.99;
  int horizon = 1;
  std::vector<double> action_low;
  std::vector<double> action_high;
};

enum class DatasetSource { kDemo, kAugmented };

struct DatasetMetadata {
  DatasetSource source = DatasetSource::kDemo;
  std::uint64_t seed = 0;
  std::string rule;
  // Free-form JSON object (serialized text) carrying counts, rejection
  // statistics and per-episode provenance records. Empty means none.
  std::string extra_json;
};

struct Dataset {
  std::vector<TrajectorySegment> episodes;
  std::string task_id;
  DatasetMetadata metadata;

  std::size_t NumTransitions() const;
  bool empty() const { return NumTransitions() == 0; }
};

// True iff next_state of every transition equals, bitwise, the state of the
// transition after it.
bool ChainCheck(const TrajectorySegment& segment);

// True iff no transition follows the first terminal one.
bool TerminalCheck(const TrajectorySegment& segment);

// Location of a window inside a dataset.
struct WindowRef {
  std::size_t episode = 0;
  std::size_t start = 0;
  std::size_t length = 0;
};

// Draws a contiguous window of min(k, episode length) transitions. The
// episode is drawn with probability proportional to its length and the start
// index uniformly among valid starts, so every transition is equally likely
// to begin a window when k = 1. k = 0 selects whole episodes.
WindowRef SampleWindowRef(const Dataset& dataset, std::size_t k,
                          RngStream& rng);
TrajectorySegment SegmentWindow(const Dataset& dataset, std::size_t k,
                                RngStream& rng);
TrajectorySegment ExtractWindow(const Dataset& dataset, const WindowRef& ref);

// sum_t gamma^t r_t.
double DiscountedReturn(const TrajectorySegment& segment, double gamma);

// Undiscounted return.
double SegmentReturn(const TrajectorySegment& segment);

}  // namespace guda

#endif  // GUDA_CORE_DATA_H_
