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

#include "guda/rng.h"

#include <cmath>

#include "guda/vec2.h"

namespace guda {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      engine_(SplitMix64(SplitMix64(master_seed) ^ SplitMix64(~stream_id))) {}

RngStream RngStream::Child(std::uint64_t child_id) const {
  return RngStream(SplitMix64(master_seed_ ^ SplitMix64(stream_id_)),
                   child_id);
}

double RngStream::Uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::Uniform(double lo, double hi) {
  return lo + (hi - lo) * Uniform01();
}

std::uint64_t RngStream::UniformIndex(std::uint64_t n) {
  // Rejection on the top of the range removes modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return r % n;
}

double RngStream::Normal(double mean, double stddev) {
  // Box-Muller; 1 - U keeps the log argument in (0, 1].
  double u1 = 1.0 - Uniform01();
  double u2 = Uniform01();
  double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  return mean + stddev * z;
}

double RngStream::TruncatedNormal(double mean, double stddev, double width) {
  if (stddev <= 0.0) return mean;
  for (;;) {
    double z = Normal(mean, stddev);
    if (std::fabs(z - mean) <= width) return z;
  }
}

}  // namespace guda
