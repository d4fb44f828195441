// Copyright 2026 The interj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "interj/model.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "json.hpp"

#include "interj/error.h"
#include "interj/random.h"

namespace interj {

std::string_view ActivationName(Activation a) {
  return a == Activation::kRelu ? "relu" : "tanh";
}

Activation ParseActivation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  throw Error(ErrorCode::kConfigError, "unknown activation '" + std::string(name) + "'");
}

namespace {

void CheckLayerSizes(const std::vector<size_t> &sizes) {
  if (sizes.size() < 2)
    throw Error(ErrorCode::kShapeMismatch, "a network needs input and output layers");
  for (size_t s : sizes)
    if (s == 0) throw Error(ErrorCode::kShapeMismatch, "layer of width 0");
}

Eigen::MatrixXd Activate(const Eigen::MatrixXd &z, Activation a) {
  if (a == Activation::kRelu) return z.cwiseMax(0.0);
  return z.array().tanh().matrix();
}

// Derivative expressed through the pre-activation z and activation h.
Eigen::MatrixXd ActivationGrad(const Eigen::MatrixXd &z, const Eigen::MatrixXd &h,
                               Activation a) {
  if (a == Activation::kRelu) return (z.array() > 0.0).cast<double>().matrix();
  return (1.0 - h.array().square()).matrix();
}

void CheckInputs(const ModelParams &params, const Eigen::MatrixXd &rows,
                 std::span<const int> labels) {
  if (static_cast<size_t>(rows.cols()) != params.input_dim())
    throw Error(ErrorCode::kShapeMismatch,
                "model expects " + std::to_string(params.input_dim()) +
                    " features, got " + std::to_string(rows.cols()));
  if (static_cast<size_t>(rows.rows()) != labels.size())
    throw Error(ErrorCode::kShapeMismatch, "row and label counts differ");
  if (labels.empty()) throw Error(ErrorCode::kEmptyTrainingSet, "empty batch");
  for (int y : labels)
    if (y < 0 || static_cast<size_t>(y) >= params.output_dim())
      throw Error(ErrorCode::kUnknownLabel, "label index " + std::to_string(y));
}

}  // namespace

ModelParams ZeroModel(const std::vector<size_t> &layer_sizes, Activation activation) {
  CheckLayerSizes(layer_sizes);
  ModelParams p;
  p.layer_sizes = layer_sizes;
  p.activation = activation;
  for (size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const auto in = static_cast<Eigen::Index>(layer_sizes[l]);
    const auto out = static_cast<Eigen::Index>(layer_sizes[l + 1]);
    p.layers.push_back({Eigen::MatrixXd::Zero(out, in), Eigen::VectorXd::Zero(out)});
  }
  const auto in = static_cast<Eigen::Index>(layer_sizes.front());
  p.norm = {Eigen::VectorXd::Zero(in), Eigen::VectorXd::Ones(in)};
  return p;
}

ModelParams InitModel(const std::vector<size_t> &layer_sizes, Activation activation,
                      uint64_t seed) {
  ModelParams p = ZeroModel(layer_sizes, activation);
  Rng rng(DeriveSeed(seed, "init"));
  for (auto &layer : p.layers) {
    const double scale = std::sqrt(2.0 / static_cast<double>(layer.weights.cols()));
    for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
      for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
        layer.weights(r, c) = scale * rng.Gaussian();
  }
  return p;
}

NormStats FitNormStats(const Eigen::MatrixXd &rows) {
  if (rows.rows() == 0) throw Error(ErrorCode::kEmptyTrainingSet, "no rows to fit");
  NormStats s;
  s.mean = rows.colwise().mean().transpose();
  const Eigen::MatrixXd centered = rows.rowwise() - s.mean.transpose();
  s.stddev = (centered.array().square().colwise().sum() / static_cast<double>(rows.rows()))
                 .sqrt()
                 .transpose();
  s.stddev = s.stddev.cwiseMax(kStdFloor);
  return s;
}

Eigen::MatrixXd StandardizeColumns(const NormStats &norm, const Eigen::MatrixXd &rows) {
  Eigen::MatrixXd cols = rows.transpose();
  cols.colwise() -= norm.mean;
  cols.array().colwise() /= norm.stddev.array();
  return cols;
}

Eigen::MatrixXd Softmax(const Eigen::MatrixXd &logits) {
  Eigen::MatrixXd p = logits;
  for (Eigen::Index c = 0; c < p.cols(); ++c) {
    const double mx = p.col(c).maxCoeff();
    p.col(c) = (p.col(c).array() - mx).exp().matrix();
    p.col(c) /= p.col(c).sum();
  }
  return p;
}

Eigen::MatrixXd Logits(const ModelParams &params, const Eigen::MatrixXd &columns) {
  Eigen::MatrixXd h = columns;
  for (size_t l = 0; l < params.layers.size(); ++l) {
    const auto &layer = params.layers[l];
    Eigen::MatrixXd z = layer.weights * h;
    z.colwise() += layer.biases;
    h = l + 1 < params.layers.size() ? Activate(z, params.activation) : z;
  }
  return h;
}

Eigen::MatrixXd ForwardBatch(const ModelParams &params, const Eigen::MatrixXd &rows) {
  if (static_cast<size_t>(rows.cols()) != params.input_dim())
    throw Error(ErrorCode::kShapeMismatch,
                "model expects " + std::to_string(params.input_dim()) +
                    " features, got " + std::to_string(rows.cols()));
  return Softmax(Logits(params, StandardizeColumns(params.norm, rows)));
}

Eigen::VectorXd Forward(const ModelParams &params, std::span<const double> x) {
  Eigen::MatrixXd row(1, static_cast<Eigen::Index>(x.size()));
  for (size_t i = 0; i < x.size(); ++i) row(0, static_cast<Eigen::Index>(i)) = x[i];
  return ForwardBatch(params, row).col(0);
}

LossAndGradients LossAndGrad(const ModelParams &params, const Eigen::MatrixXd &rows,
                             std::span<const int> labels) {
  CheckInputs(params, rows, labels);
  const size_t depth = params.layers.size();
  const auto batch = static_cast<double>(labels.size());

  // Forward pass keeping pre-activations and activations.
  std::vector<Eigen::MatrixXd> acts(depth + 1), pre(depth);
  acts[0] = StandardizeColumns(params.norm, rows);
  for (size_t l = 0; l < depth; ++l) {
    pre[l] = params.layers[l].weights * acts[l];
    pre[l].colwise() += params.layers[l].biases;
    acts[l + 1] = l + 1 < depth ? Activate(pre[l], params.activation) : pre[l];
  }
  const Eigen::MatrixXd &logits = acts[depth];
  const Eigen::MatrixXd probs = Softmax(logits);

  double loss = 0.0;
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    const double mx = logits.col(c).maxCoeff();
    const double lse = mx + std::log((logits.col(c).array() - mx).exp().sum());
    loss += lse - logits(labels[static_cast<size_t>(c)], c);
  }
  loss /= batch;
  size_t correct = 0;
  for (Eigen::Index c = 0; c < probs.cols(); ++c) {
    Eigen::Index best;
    probs.col(c).maxCoeff(&best);
    correct += best == labels[static_cast<size_t>(c)];
  }
  if (!std::isfinite(loss))
    throw Error(ErrorCode::kNonFiniteLoss, "cross-entropy is not finite");

  LossAndGradients out;
  out.loss = loss;
  out.correct = correct;
  out.grads.layers.resize(depth);
  Eigen::MatrixXd delta = probs;
  for (Eigen::Index c = 0; c < delta.cols(); ++c)
    delta(labels[static_cast<size_t>(c)], c) -= 1.0;
  delta /= batch;
  for (size_t l = depth; l-- > 0;) {
    out.grads.layers[l].weights = delta * acts[l].transpose();
    out.grads.layers[l].biases = delta.rowwise().sum();
    if (l > 0) {
      delta = (params.layers[l].weights.transpose() * delta)
                  .cwiseProduct(ActivationGrad(pre[l - 1], acts[l], params.activation));
    }
  }
  return out;
}

double Loss(const ModelParams &params, const Eigen::MatrixXd &rows,
            std::span<const int> labels) {
  CheckInputs(params, rows, labels);
  const Eigen::MatrixXd logits = Logits(params, StandardizeColumns(params.norm, rows));
  double loss = 0.0;
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    const double mx = logits.col(c).maxCoeff();
    loss += mx + std::log((logits.col(c).array() - mx).exp().sum()) -
            logits(labels[static_cast<size_t>(c)], c);
  }
  return loss / static_cast<double>(labels.size());
}

void AdamUpdate(std::span<double> params, std::span<const double> grads,
                std::span<double> m, std::span<double> v, const AdamConfig &config,
                int64_t step) {
  if (grads.size() != params.size() || m.size() != params.size() ||
      v.size() != params.size())
    throw Error(ErrorCode::kShapeMismatch, "Adam buffers differ in size");
  const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
  for (size_t i = 0; i < params.size(); ++i) {
    m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * grads[i];
    v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * grads[i] * grads[i];
    const double m_hat = m[i] / c1;
    const double v_hat = v[i] / c2;
    params[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

AdamState InitAdam(const ModelParams &params, const AdamConfig &config) {
  AdamState s;
  s.config = config;
  for (const auto &layer : params.layers) {
    DenseLayer zero{Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()),
                    Eigen::VectorXd::Zero(layer.biases.size())};
    s.m.push_back(zero);
    s.v.push_back(zero);
  }
  return s;
}

namespace {

template <typename M>
std::span<double> Flat(M &m) {
  return {m.data(), static_cast<size_t>(m.size())};
}

template <typename M>
std::span<const double> FlatConst(const M &m) {
  return {m.data(), static_cast<size_t>(m.size())};
}

}  // namespace

void AdamStep(AdamState *state, ModelParams *params, const Gradients &grads) {
  if (grads.layers.size() != params->layers.size() ||
      state->m.size() != params->layers.size())
    throw Error(ErrorCode::kShapeMismatch, "gradient and parameter depth differ");
  ++state->step;
  for (size_t l = 0; l < params->layers.size(); ++l) {
    auto &layer = params->layers[l];
    AdamUpdate(Flat(layer.weights), FlatConst(grads.layers[l].weights),
               Flat(state->m[l].weights), Flat(state->v[l].weights), state->config,
               state->step);
    AdamUpdate(Flat(layer.biases), FlatConst(grads.layers[l].biases),
               Flat(state->m[l].biases), Flat(state->v[l].biases), state->config,
               state->step);
  }
}

std::vector<int> Predict(const ModelParams &params, const Eigen::MatrixXd &rows) {
  const Eigen::MatrixXd probs = ForwardBatch(params, rows);
  std::vector<int> out(static_cast<size_t>(probs.cols()));
  for (Eigen::Index c = 0; c < probs.cols(); ++c) {
    Eigen::Index best;
    probs.col(c).maxCoeff(&best);
    out[static_cast<size_t>(c)] = static_cast<int>(best);
  }
  return out;
}

namespace {

double Accuracy(const std::vector<int> &predicted, const std::vector<int> &truth) {
  size_t correct = 0;
  for (size_t i = 0; i < truth.size(); ++i) correct += predicted[i] == truth[i];
  return truth.empty() ? 0.0 : static_cast<double>(correct) / truth.size();
}

}  // namespace

TrainResult Train(const LabeledRows &train, const LabeledRows &validation,
                  const TrainConfig &config) {
  if (train.size() == 0)
    throw Error(ErrorCode::kEmptyTrainingSet, "no training rows");
  if (config.epochs < 1) throw Error(ErrorCode::kConfigError, "epochs must be >= 1");
  if (config.batch_size == 0) throw Error(ErrorCode::kConfigError, "batch size is 0");
  if (static_cast<size_t>(train.features.rows()) != train.size())
    throw Error(ErrorCode::kShapeMismatch, "training rows and labels differ");

  std::vector<size_t> sizes{static_cast<size_t>(train.features.cols())};
  sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
  sizes.push_back(5);
  ModelParams params = InitModel(sizes, config.activation, config.seed);
  params.norm = FitNormStats(train.features);
  AdamConfig adam_config;
  adam_config.learning_rate = config.learning_rate;
  AdamState adam = InitAdam(params, adam_config);

  const bool has_validation = validation.size() > 0;
  Rng shuffle_rng(DeriveSeed(config.seed, "shuffle"));
  std::vector<size_t> order(train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  TrainResult result;
  result.params = params;
  double best_loss = std::numeric_limits<double>::infinity();
  int since_best = 0;
  const auto dim = train.features.cols();
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.shuffle) shuffle_rng.Shuffle(&order);
    double loss_sum = 0.0;
    size_t correct = 0;
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      const size_t end = std::min(order.size(), start + config.batch_size);
      Eigen::MatrixXd batch(static_cast<Eigen::Index>(end - start), dim);
      std::vector<int> labels(end - start);
      for (size_t i = start; i < end; ++i) {
        batch.row(static_cast<Eigen::Index>(i - start)) =
            train.features.row(static_cast<Eigen::Index>(order[i]));
        labels[i - start] = train.labels[order[i]];
      }
      const LossAndGradients lg = LossAndGrad(params, batch, labels);
      loss_sum += lg.loss * static_cast<double>(end - start);
      correct += lg.correct;
      AdamStep(&adam, &params, lg.grads);
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(train.size());
    stats.train_accuracy = static_cast<double>(correct) / static_cast<double>(train.size());
    if (has_validation) {
      stats.validation_loss = Loss(params, validation.features, validation.labels);
      stats.validation_accuracy =
          Accuracy(Predict(params, validation.features), validation.labels);
      if (!std::isfinite(stats.validation_loss))
        throw Error(ErrorCode::kNonFiniteLoss, "validation loss is not finite");
    }
    result.history.push_back(stats);
    const double monitored = has_validation ? stats.validation_loss : stats.train_loss;
    if (monitored < best_loss) {
      best_loss = monitored;
      result.params = params;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (config.patience > 0 && ++since_best >= config.patience) {
      break;
    }
  }
  return result;
}

namespace {

constexpr const char *kCheckpointFormat = "interj-fnn";
constexpr int kCheckpointVersion = 1;

std::string HexEncode(std::span<const double> values) {
  static const char *digits = "0123456789abcdef";
  std::string out;
  out.reserve(values.size() * 16);
  for (double v : values) {
    uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int byte = 0; byte < 8; ++byte) {
      const auto b = static_cast<unsigned>((bits >> (8 * byte)) & 0xff);
      out.push_back(digits[b >> 4]);
      out.push_back(digits[b & 0xf]);
    }
  }
  return out;
}

std::vector<double> HexDecode(const std::string &hex, size_t expected) {
  if (hex.size() != expected * 16)
    throw Error(ErrorCode::kCorruptCheckpoint,
                "array holds " + std::to_string(hex.size() / 16) + " values, expected " +
                    std::to_string(expected));
  auto nibble = [](char c) -> uint64_t {
    if (c >= '0' && c <= '9') return static_cast<uint64_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<uint64_t>(c - 'a' + 10);
    throw Error(ErrorCode::kCorruptCheckpoint, "bad hex digit");
  };
  std::vector<double> out(expected);
  for (size_t i = 0; i < expected; ++i) {
    uint64_t bits = 0;
    for (int byte = 0; byte < 8; ++byte) {
      const size_t pos = i * 16 + static_cast<size_t>(byte) * 2;
      bits |= (nibble(hex[pos]) << 4 | nibble(hex[pos + 1])) << (8 * byte);
    }
    std::memcpy(&out[i], &bits, sizeof bits);
  }
  return out;
}

}  // namespace

std::string SerializeCheckpoint(const ModelParams &params, const std::string &config_hash) {
  nlohmann::ordered_json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointVersion;
  j["layer_sizes"] = params.layer_sizes;
  j["activation"] = ActivationName(params.activation);
  j["config_hash"] = config_hash;
  j["norm_mean"] = HexEncode(FlatConst(params.norm.mean));
  j["norm_std"] = HexEncode(FlatConst(params.norm.stddev));
  auto layers = nlohmann::ordered_json::array();
  for (const auto &layer : params.layers) {
    // Weights are stored row-major (one output unit per row).
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w =
        layer.weights;
    layers.push_back({{"weights", HexEncode({w.data(), static_cast<size_t>(w.size())})},
                      {"biases", HexEncode(FlatConst(layer.biases))}});
  }
  j["layers"] = layers;
  return j.dump(1) + "\n";
}

ModelParams ParseCheckpoint(const std::string &text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kCorruptCheckpoint, e.what());
  }
  try {
    if (!j.is_object() || j.value("format", std::string()) != kCheckpointFormat)
      throw Error(ErrorCode::kCorruptCheckpoint, "not an interj checkpoint");
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion)
      throw Error(ErrorCode::kVersionMismatch,
                  "checkpoint version " + std::to_string(version) + ", expected " +
                      std::to_string(kCheckpointVersion));
    const auto sizes = j.at("layer_sizes").get<std::vector<size_t>>();
    ModelParams p = ZeroModel(sizes, ParseActivation(j.at("activation").get<std::string>()));
    const auto in = sizes.front();
    const auto mean = HexDecode(j.at("norm_mean").get<std::string>(), in);
    const auto stddev = HexDecode(j.at("norm_std").get<std::string>(), in);
    p.norm.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(in));
    p.norm.stddev =
        Eigen::Map<const Eigen::VectorXd>(stddev.data(), static_cast<Eigen::Index>(in));
    const auto &layers = j.at("layers");
    if (!layers.is_array() || layers.size() != p.layers.size())
      throw Error(ErrorCode::kCorruptCheckpoint, "layer count disagrees with layer_sizes");
    for (size_t l = 0; l < p.layers.size(); ++l) {
      auto &layer = p.layers[l];
      const auto rows = layer.weights.rows(), cols = layer.weights.cols();
      const auto w = HexDecode(layers[l].at("weights").get<std::string>(),
                               static_cast<size_t>(rows * cols));
      layer.weights =
          Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
              w.data(), rows, cols);
      const auto b = HexDecode(layers[l].at("biases").get<std::string>(),
                               static_cast<size_t>(rows));
      layer.biases = Eigen::Map<const Eigen::VectorXd>(b.data(), rows);
    }
    return p;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kCorruptCheckpoint, e.what());
  }
}

void SaveCheckpoint(const ModelParams &params, const std::string &path,
                    const std::string &config_hash) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot create " + path);
  out << SerializeCheckpoint(params, config_hash);
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path);
}

ModelParams LoadCheckpoint(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return ParseCheckpoint(text);
}

}  // namespace interj
