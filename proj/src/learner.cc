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

#include "guda/learner.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "guda/dataset_io.h"
#include "guda/error.h"
#include "json.hpp"

namespace guda {
namespace {

using json = nlohmann::json;

constexpr int kCheckpointVersion = 1;

Eigen::VectorXd ToEigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void AppendEigen(std::string& out, const Eigen::VectorXd& v) {
  AppendRealArray(out, std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

struct Activations {
  // inputs[l] feeds layer l; inputs.back() is the final tanh output.
  std::vector<Eigen::MatrixXd> inputs;
};

Activations ForwardTrace(const PolicyNet& net, const Eigen::MatrixXd& states) {
  if (states.rows() != net.input_dim()) {
    throw ConfigError("state has " + std::to_string(states.rows()) +
                      " components, policy expects " + std::to_string(net.input_dim()));
  }
  Activations act;
  act.inputs.reserve(net.layers().size() + 1);
  act.inputs.push_back(
      ((states.colwise() - net.input_mean()).array().colwise() * net.input_scale().array())
          .matrix());
  for (const auto& layer : net.layers()) {
    Eigen::MatrixXd z = layer.w * act.inputs.back();
    z.colwise() += layer.b;
    act.inputs.push_back(z.array().tanh().matrix());
  }
  return act;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> MidHalf(const PolicyNet& net) {
  const Eigen::VectorXd lo = ToEigen(net.action_low());
  const Eigen::VectorXd hi = ToEigen(net.action_high());
  return {0.5 * (lo + hi), 0.5 * (hi - lo)};
}

std::vector<double> ReadReals(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw DataError(std::string("checkpoint: missing array '") + key + "'");
  }
  return j.at(key).get<std::vector<double>>();
}

}  // namespace

PolicyNet::PolicyNet(std::vector<int> sizes, std::vector<double> action_low,
                     std::vector<double> action_high)
    : sizes_(std::move(sizes)),
      action_low_(std::move(action_low)),
      action_high_(std::move(action_high)) {
  if (sizes_.size() < 2) throw ConfigError("policy needs input and output sizes");
  for (int s : sizes_) {
    if (s < 1) throw ConfigError("layer sizes must be positive");
  }
  if (static_cast<int>(action_low_.size()) != sizes_.back() ||
      static_cast<int>(action_high_.size()) != sizes_.back()) {
    throw ConfigError("action bounds do not match the output size");
  }
  for (std::size_t i = 1; i < sizes_.size(); ++i) {
    layers_.push_back({Eigen::MatrixXd::Zero(sizes_[i], sizes_[i - 1]),
                       Eigen::VectorXd::Zero(sizes_[i])});
  }
  input_mean_ = Eigen::VectorXd::Zero(sizes_.front());
  input_scale_ = Eigen::VectorXd::Ones(sizes_.front());
}

PolicyNet PolicyNet::Random(std::vector<int> sizes, std::vector<double> action_low,
                            std::vector<double> action_high, double init_scale,
                            RngStream& rng) {
  PolicyNet net(std::move(sizes), std::move(action_low), std::move(action_high));
  for (auto& layer : net.layers_) {
    const double bound = init_scale / std::sqrt(static_cast<double>(layer.w.cols()));
    for (Eigen::Index r = 0; r < layer.w.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.w.cols(); ++c) {
        layer.w(r, c) = rng.Uniform(-bound, bound);
      }
    }
    for (Eigen::Index r = 0; r < layer.b.size(); ++r) layer.b(r) = rng.Uniform(-bound, bound);
  }
  return net;
}

void PolicyNet::SetInputNormalization(Eigen::VectorXd mean, Eigen::VectorXd scale) {
  if (mean.size() != input_dim() || scale.size() != input_dim()) {
    throw ConfigError("normalization size does not match the input size");
  }
  input_mean_ = std::move(mean);
  input_scale_ = std::move(scale);
}

Eigen::MatrixXd PolicyNet::Forward(const Eigen::MatrixXd& states) const {
  Activations act = ForwardTrace(*this, states);
  const auto [mid, half] = MidHalf(*this);
  Eigen::MatrixXd out = act.inputs.back();
  return ((out.array().colwise() * half.array()).colwise() + mid.array()).matrix();
}

ActionVector PolicyNet::Forward(const StateVector& state) const {
  const Eigen::MatrixXd x = ToEigen(state);
  const Eigen::MatrixXd a = Forward(x);
  return ActionVector(a.data(), a.data() + a.size());
}

std::size_t PolicyNet::NumParams() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += static_cast<std::size_t>(l.w.size() + l.b.size());
  return n;
}

std::vector<double> PolicyNet::Flatten() const {
  std::vector<double> p;
  p.reserve(NumParams());
  for (const auto& l : layers_) {
    for (Eigen::Index r = 0; r < l.w.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.w.cols(); ++c) p.push_back(l.w(r, c));
    }
    for (Eigen::Index r = 0; r < l.b.size(); ++r) p.push_back(l.b(r));
  }
  return p;
}

void PolicyNet::Unflatten(const std::vector<double>& p) {
  if (p.size() != NumParams()) throw ConfigError("parameter count mismatch");
  std::size_t i = 0;
  for (auto& l : layers_) {
    for (Eigen::Index r = 0; r < l.w.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.w.cols(); ++c) l.w(r, c) = p[i++];
    }
    for (Eigen::Index r = 0; r < l.b.size(); ++r) l.b(r) = p[i++];
  }
}

bool PolicyNet::operator==(const PolicyNet& o) const {
  return sizes_ == o.sizes_ && action_low_ == o.action_low_ &&
         action_high_ == o.action_high_ && input_mean_ == o.input_mean_ &&
         input_scale_ == o.input_scale_ && Flatten() == o.Flatten();
}

LossAndGrad BcLossAndGrad(const PolicyNet& net, const Eigen::MatrixXd& states,
                          const Eigen::MatrixXd& actions) {
  if (states.cols() == 0) throw ConfigError("empty batch");
  if (actions.rows() != net.output_dim() || actions.cols() != states.cols()) {
    throw ConfigError("action batch shape does not match the policy");
  }
  const Activations act = ForwardTrace(net, states);
  const auto [mid, half] = MidHalf(net);
  const Eigen::ArrayXXd t = act.inputs.back().array();
  const Eigen::ArrayXXd pred = (t.colwise() * half.array()).colwise() + mid.array();
  const Eigen::ArrayXXd err = pred - actions.array();
  const double count = static_cast<double>(err.size());

  LossAndGrad out;
  out.loss = err.square().sum() / count;
  out.grad.resize(net.layers().size());

  // dL/dz for the output layer.
  Eigen::ArrayXXd scaled = err.colwise() * half.array();
  Eigen::MatrixXd delta = ((2.0 / count) * scaled * (1.0 - t.square())).matrix();
  for (std::size_t l = net.layers().size(); l-- > 0;) {
    const Eigen::MatrixXd& input = act.inputs[l];
    out.grad[l].w = delta * input.transpose();
    out.grad[l].b = delta.rowwise().sum();
    if (l > 0) {
      delta = ((net.layers()[l].w.transpose() * delta).array() *
               (1.0 - input.array().square()))
                  .matrix();
    }
  }
  return out;
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (batch_size < 1) throw ConfigError("batch size must be at least 1");
  if (gradient_steps < 0) throw ConfigError("gradient steps must be non-negative");
  if (!(init_scale >= 0.0)) throw ConfigError("init scale must be non-negative");
  if (log_every < 1) throw ConfigError("log_every must be at least 1");
  for (int h : hidden) {
    if (h < 1) throw ConfigError("hidden sizes must be positive");
  }
}

TrainResult TrainBc(const Dataset& dataset, const MdpSpec& mdp,
                    const TrainConfig& config) {
  config.Validate();
  const std::size_t n = dataset.NumTransitions();
  if (n == 0) throw DataError("cannot train on an empty dataset");

  Eigen::MatrixXd xs(mdp.state_dim, static_cast<Eigen::Index>(n));
  Eigen::MatrixXd ys(mdp.action_dim, static_cast<Eigen::Index>(n));
  Eigen::Index col = 0;
  for (const auto& ep : dataset.episodes) {
    for (const auto& tr : ep.transitions) {
      if (static_cast<int>(tr.state.size()) != mdp.state_dim ||
          static_cast<int>(tr.action.size()) != mdp.action_dim) {
        throw DataError("transition dimensions do not match the task");
      }
      xs.col(col) = ToEigen(tr.state);
      ys.col(col) = ToEigen(tr.action);
      ++col;
    }
  }

  std::vector<int> sizes = {mdp.state_dim};
  sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
  sizes.push_back(mdp.action_dim);
  RngStream init_rng(config.seed, 0);
  TrainResult result;
  result.net = PolicyNet::Random(sizes, mdp.action_low, mdp.action_high,
                                 config.init_scale, init_rng);

  if (config.normalize_inputs) {
    const Eigen::VectorXd mean = xs.rowwise().mean();
    const Eigen::VectorXd var =
        (xs.colwise() - mean).array().square().rowwise().sum() / static_cast<double>(n);
    Eigen::VectorXd scale(mdp.state_dim);
    for (int i = 0; i < mdp.state_dim; ++i) {
      const double sd = std::sqrt(var(i));
      scale(i) = sd > 1e-8 ? 1.0 / sd : 1.0;
    }
    result.net.SetInputNormalization(mean, scale);
  }

  RngStream batch_rng(config.seed, 1);
  Eigen::MatrixXd bx(mdp.state_dim, config.batch_size);
  Eigen::MatrixXd by(mdp.action_dim, config.batch_size);
  for (int step = 0; step < config.gradient_steps; ++step) {
    for (int b = 0; b < config.batch_size; ++b) {
      const auto i = static_cast<Eigen::Index>(batch_rng.UniformIndex(n));
      bx.col(b) = xs.col(i);
      by.col(b) = ys.col(i);
    }
    LossAndGrad lg = BcLossAndGrad(result.net, bx, by);
    if (!std::isfinite(lg.loss)) {
      std::ostringstream msg;
      msg << "non-finite BC loss at step " << step << " (loss " << lg.loss << ")";
      throw NumericError(msg.str());
    }
    if (step % config.log_every == 0 || step + 1 == config.gradient_steps) {
      result.loss_curve.push_back({step, lg.loss});
    }
    auto& layers = result.net.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
      layers[l].w -= config.learning_rate * lg.grad[l].w;
      layers[l].b -= config.learning_rate * lg.grad[l].b;
    }
  }
  return result;
}

void WriteCheckpoint(std::ostream& out, const PolicyNet& net) {
  std::string s = "{\"format\":\"guda-policy\",\"version\":" +
                  std::to_string(kCheckpointVersion) + ",\"sizes\":[";
  for (std::size_t i = 0; i < net.sizes().size(); ++i) {
    if (i) s += ',';
    s += std::to_string(net.sizes()[i]);
  }
  s += "],\"action_low\":";
  AppendRealArray(s, net.action_low());
  s += ",\"action_high\":";
  AppendRealArray(s, net.action_high());
  s += ",\"input_mean\":";
  AppendEigen(s, net.input_mean());
  s += ",\"input_scale\":";
  AppendEigen(s, net.input_scale());
  s += ",\"layers\":[";
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    const auto& layer = net.layers()[l];
    if (l) s += ',';
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(layer.w.size()));
    for (Eigen::Index r = 0; r < layer.w.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.w.cols(); ++c) w.push_back(layer.w(r, c));
    }
    s += "{\"w\":";
    AppendRealArray(s, w);
    s += ",\"b\":";
    AppendEigen(s, layer.b);
    s += '}';
  }
  s += "]}\n";
  out << s;
}

void WriteCheckpointFile(const std::string& path, const PolicyNet& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint '" + path + "'");
  WriteCheckpoint(out, net);
  if (!out) throw DataError("failed writing checkpoint '" + path + "'");
}

PolicyNet ReadCheckpoint(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
  if (j.value("format", "") != "guda-policy") throw DataError("not a policy checkpoint");
  if (j.value("version", 0) != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version");
  }
  try {
    PolicyNet net(j.at("sizes").get<std::vector<int>>(), ReadReals(j, "action_low"),
                  ReadReals(j, "action_high"));
    const auto mean = ReadReals(j, "input_mean");
    const auto scale = ReadReals(j, "input_scale");
    net.SetInputNormalization(ToEigen(mean), ToEigen(scale));
    const auto& layers = j.at("layers");
    if (layers.size() != net.layers().size()) throw DataError("checkpoint: layer count");
    std::vector<double> flat;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const auto w = ReadReals(layers[l], "w");
      const auto b = ReadReals(layers[l], "b");
      const auto& shape = net.layers()[l];
      if (w.size() != static_cast<std::size_t>(shape.w.size()) ||
          b.size() != static_cast<std::size_t>(shape.b.size())) {
        throw DataError("checkpoint: layer " + std::to_string(l) + " shape");
      }
      flat.insert(flat.end(), w.begin(), w.end());
      flat.insert(flat.end(), b.begin(), b.end());
    }
    net.Unflatten(flat);
    return net;
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
}

PolicyNet ReadCheckpointFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint '" + path + "'");
  return ReadCheckpoint(in);
}

Policy MakePolicy(std::shared_ptr<const PolicyNet> net) {
  return [net = std::move(net)](const StateVector& s) { return net->Forward(s); };
}

Policy BcLearner::Fit(const Dataset& dataset, const MdpSpec& mdp, std::uint64_t seed) {
  TrainConfig config = config_;
  config.seed = seed;
  last_ = TrainBc(dataset, mdp, config);
  return MakePolicy(std::make_shared<const PolicyNet>(last_.net));
}

}  // namespace guda
