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

#ifndef GUDA_STATS_H_
#define GUDA_STATS_H_

#include <functional>
#include <vector>

#include "guda/rng.h"

namespace guda {

struct NormalizationAnchors {
  double expert_return = 1.0;
  double random_return = 0.0;

  // Throws ConfigError when the anchors coincide or are not finite.
  void Validate() const;
};

// 100 * (r - random) / (expert - random).
double NormalizedReturn(double r, const NormalizationAnchors& anchors);

double Mean(const std::vector<double>& values);
// Sample variance (n - 1 denominator); 0 for fewer than two values.
double SampleVariance(const std::vector<double>& values);

// Interquartile mean: sort, drop floor(n/4) values from each end, average
// the rest. Throws ConfigError for an empty list.
double Iqm(std::vector<double> values);

// Linear-interpolation quantile of sorted values, q in [0, 1].
double QuantileSorted(const std::vector<double>& sorted, double q);

using Statistic = std::function<double(const std::vector<double>&)>;

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Percentile bootstrap interval at the given level. Requires at least two
// values, resamples >= 100 and level in (0, 1).
Interval BootstrapCi(const std::vector<double>& values, const Statistic& statistic,
                     int resamples, double level, RngStream& rng);

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
};

// Welch's unequal-variance t-test. With zero variance in both samples the
// p-value is 1 for equal means and 0 otherwise.
TTestResult WelchTTest(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace guda

#endif  // GUDA_STATS_H_
