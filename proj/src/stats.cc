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

#include "guda/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "guda/error.h"

namespace guda {

void NormalizationAnchors::Validate() const {
  if (!std::isfinite(expert_return) || !std::isfinite(random_return)) {
    throw ConfigError("normalization anchors must be finite");
  }
  if (expert_return == random_return) {
    throw ConfigError("degenerate normalization anchors (expert == random)");
  }
}

double NormalizedReturn(double r, const NormalizationAnchors& anchors) {
  anchors.Validate();
  return 100.0 * ((r - anchors.random_return) /
                  (anchors.expert_return - anchors.random_return));
}

double Mean(const std::vector<double>& values) {
  if (values.empty()) throw ConfigError("mean of an empty list");
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double SampleVariance(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double m = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return ss / static_cast<double>(values.size() - 1);
}

double Iqm(std::vector<double> values) {
  if (values.empty()) throw ConfigError("iqm of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t trim = values.size() / 4;
  double sum = 0.0;
  for (std::size_t i = trim; i < values.size() - trim; ++i) sum += values[i];
  return sum / static_cast<double>(values.size() - 2 * trim);
}

double QuantileSorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw ConfigError("quantile of an empty list");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Interval BootstrapCi(const std::vector<double>& values, const Statistic& statistic,
                     int resamples, double level, RngStream& rng) {
  if (values.size() < 2) throw ConfigError("bootstrap needs at least two values");
  if (resamples < 100) throw ConfigError("bootstrap needs at least 100 resamples");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("level must lie in (0, 1)");
  std::vector<double> stats(static_cast<std::size_t>(resamples));
  std::vector<double> sample(values.size());
  for (auto& s : stats) {
    for (auto& x : sample) x = values[rng.UniformIndex(values.size())];
    s = statistic(sample);
  }
  std::sort(stats.begin(), stats.end());
  const double tail = 0.5 * (1.0 - level);
  return {QuantileSorted(stats, tail), QuantileSorted(stats, 1.0 - tail)};
}

TTestResult WelchTTest(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) throw ConfigError("t-test needs two values per group");
  const double ma = Mean(a);
  const double mb = Mean(b);
  const double qa = SampleVariance(a) / static_cast<double>(a.size());
  const double qb = SampleVariance(b) / static_cast<double>(b.size());
  TTestResult r;
  if (qa + qb == 0.0) {
    r.df = static_cast<double>(a.size() + b.size() - 2);
    if (ma == mb) {
      r.p = 1.0;
    } else {
      r.t = ma > mb ? INFINITY : -INFINITY;
      r.p = 0.0;
    }
    return r;
  }
  r.t = (ma - mb) / std::sqrt(qa + qb);
  r.df = (qa + qb) * (qa + qb) /
         (qa * qa / static_cast<double>(a.size() - 1) +
          qb * qb / static_cast<double>(b.size() - 1));
  const boost::math::students_t dist(r.df);
  r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
  return r;
}

}  // namespace guda
