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

#ifndef GUDA_RNG_H_
#define GUDA_RNG_H_

#include <cstdint>
#include <random>

namespace guda {

// Deterministic random stream keyed by (master_seed, stream_id). Two streams
// with equal keys yield identical sequences. Distributions are implemented
// here rather than through <random>, whose algorithms are
// implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Independent stream for a sub-task (window, episode, worker). Depends only
  // on this stream's key, never on how many draws were already taken.
  RngStream Child(std::uint64_t child_id) const;

  std::uint64_t NextU64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double Uniform01();
  double Uniform(double lo, double hi);
  // Uniform integer in [0, n); n must be positive.
  std::uint64_t UniformIndex(std::uint64_t n);
  double Normal(double mean, double stddev);
  // Normal restricted to [mean - width, mean + width] by rejection.
  double TruncatedNormal(double mean, double stddev, double width);
  bool Bernoulli(double p) { return Uniform01() < p; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

std::uint64_t SplitMix64(std::uint64_t x);

}  // namespace guda

#endif  // GUDA_RNG_H_
