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

#ifndef GUDA_LEARNER_H_
#define GUDA_LEARNER_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "guda/core_data.h"
#include "guda/rng.h"

namespace guda {

struct DenseLayer {
  Eigen::MatrixXd w;  // out x in
  Eigen::VectorXd b;
};

// Feed-forward policy: tanh hidden layers, tanh output scaled to the action
// box. Inputs are standardized with a per-component (mean, scale) pair fixed
// at training time.
class PolicyNet {
 public:
  PolicyNet() = default;
  // Zero weights and biases; identity input normalization.
  PolicyNet(std::vector<int> sizes, std::vector<double> action_low,
            std::vector<double> action_high);

  // Weights and biases uniform in +-init_scale/sqrt(fan_in).
  static PolicyNet Random(std::vector<int> sizes, std::vector<double> action_low,
                          std::vector<double> action_high, double init_scale,
                          RngStream& rng);

  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  const std::vector<int>& sizes() const { return sizes_; }
  const std::vector<double>& action_low() const { return action_low_; }
  const std::vector<double>& action_high() const { return action_high_; }

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  const Eigen::VectorXd& input_mean() const { return input_mean_; }
  const Eigen::VectorXd& input_scale() const { return input_scale_; }
  void SetInputNormalization(Eigen::VectorXd mean, Eigen::VectorXd scale);

  // Throws ConfigError on a dimension mismatch.
  ActionVector Forward(const StateVector& state) const;
  // Column-per-sample batch form.
  Eigen::MatrixXd Forward(const Eigen::MatrixXd& states) const;

  std::size_t NumParams() const;
  // Parameters in layer order, each layer's W row-major then b.
  std::vector<double> Flatten() const;
  void Unflatten(const std::vector<double>& params);

  bool operator==(const PolicyNet& other) const;

 private:
  std::vector<int> sizes_;
  std::vector<double> action_low_;
  std::vector<double> action_high_;
  std::vector<DenseLayer> layers_;
  Eigen::VectorXd input_mean_;
  Eigen::VectorXd input_scale_;
};

struct LossAndGrad {
  double loss = 0.0;
  std::vector<DenseLayer> grad;  // same shapes as the net's layers
};

// Mean squared error over batch and action components, with its gradient by
// backpropagation. Columns of `states` and `actions` are samples.
LossAndGrad BcLossAndGrad(const PolicyNet& net, const Eigen::MatrixXd& states,
                          const Eigen::MatrixXd& actions);

struct TrainConfig {
  double learning_rate = 1e-3;
  int batch_size = 256;
  int gradient_steps = 20000;
  std::uint64_t seed = 0;
  double init_scale = 1.0;
  std::vector<int> hidden = {64, 64};
  // Loss is recorded every log_every steps and at the last step.
  int log_every = 100;
  bool normalize_inputs = true;

  void Validate() const;
};

struct LossPoint {
  int step = 0;
  double loss = 0.0;
};

struct TrainResult {
  PolicyNet net;
  std::vector<LossPoint> loss_curve;
};

// Plain SGD on minibatches drawn uniformly with replacement from all
// transitions. Throws NumericError on a non-finite loss.
TrainResult TrainBc(const Dataset& dataset, const MdpSpec& mdp,
                    const TrainConfig& config);

void WriteCheckpoint(std::ostream& out, const PolicyNet& net);
void WriteCheckpointFile(const std::string& path, const PolicyNet& net);
PolicyNet ReadCheckpoint(std::istream& in);
PolicyNet ReadCheckpointFile(const std::string& path);

using Policy = std::function<ActionVector(const StateVector&)>;

// Offline learner: dataset in, policy out.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::string name() const = 0;
  virtual Policy Fit(const Dataset& dataset, const MdpSpec& mdp,
                     std::uint64_t seed) = 0;
};

class BcLearner : public Learner {
 public:
  explicit BcLearner(TrainConfig config) : config_(std::move(config)) {}
  std::string name() const override { return "bc"; }
  Policy Fit(const Dataset& dataset, const MdpSpec& mdp,
             std::uint64_t seed) override;
  // Result of the most recent Fit.
  const TrainResult& last_result() const { return last_; }

 private:
  TrainConfig config_;
  TrainResult last_;
};

Policy MakePolicy(std::shared_ptr<const PolicyNet> net);

}  // namespace guda

#endif  // GUDA_LEARNER_H_
