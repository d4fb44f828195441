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

#ifndef INTERJ_MODEL_H_
#define INTERJ_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace interj {

enum class Activation { kRelu, kTanh };

std::string_view ActivationName(Activation a);
Activation ParseActivation(std::string_view name);

struct DenseLayer {
  Eigen::MatrixXd weights;  // outputs x inputs
  Eigen::VectorXd biases;
};

// Per-feature standardization fitted on training rows.
struct NormStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;
};

constexpr double kStdFloor = 1e-8;

struct ModelParams {
  std::vector<size_t> layer_sizes;  // input, hidden..., output
  Activation activation = Activation::kRelu;
  std::vector<DenseLayer> layers;
  NormStats norm;

  size_t input_dim() const { return layer_sizes.front(); }
  size_t output_dim() const { return layer_sizes.back(); }
};

// All-zero weights and identity standardization.
ModelParams ZeroModel(const std::vector<size_t> &layer_sizes,
                      Activation activation = Activation::kRelu);
// He-scaled Gaussian weights, zero biases, identity standardization.
ModelParams InitModel(const std::vector<size_t> &layer_sizes, Activation activation,
                      uint64_t seed);

// Rows of `rows` are samples. Standard deviations below kStdFloor are floored.
NormStats FitNormStats(const Eigen::MatrixXd &rows);
// Returns the standardized transpose: one column per sample.
Eigen::MatrixXd StandardizeColumns(const NormStats &norm, const Eigen::MatrixXd &rows);

// Class probabilities of one raw feature row. Throws kShapeMismatch.
Eigen::VectorXd Forward(const ModelParams &params, std::span<const double> x);
// Probabilities for every row, one column per sample.
Eigen::MatrixXd ForwardBatch(const ModelParams &params, const Eigen::MatrixXd &rows);
// Output logits for standardized inputs (one column per sample).
Eigen::MatrixXd Logits(const ModelParams &params, const Eigen::MatrixXd &columns);
// Column-wise softmax with the column max subtracted first.
Eigen::MatrixXd Softmax(const Eigen::MatrixXd &logits);

struct Gradients {
  std::vector<DenseLayer> layers;
};

struct LossAndGradients {
  double loss = 0.0;
  size_t correct = 0;  // samples whose argmax matches the label
  Gradients grads;
};

// Mean cross-entropy of raw feature rows and their gradients with respect to
// every weight and bias. Throws kShapeMismatch, kEmptyTrainingSet or
// kNonFiniteLoss.
LossAndGradients LossAndGrad(const ModelParams &params, const Eigen::MatrixXd &rows,
                             std::span<const int> labels);
double Loss(const ModelParams &params, const Eigen::MatrixXd &rows,
            std::span<const int> labels);

struct AdamConfig {
  double learning_rate = 0.009;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Elementwise bias-corrected Adam update; `step` is the 1-based step index.
void AdamUpdate(std::span<double> params, std::span<const double> grads,
                std::span<double> m, std::span<double> v, const AdamConfig &config,
                int64_t step);

struct AdamState {
  AdamConfig config;
  std::vector<DenseLayer> m, v;
  int64_t step = 0;
};

AdamState InitAdam(const ModelParams &params, const AdamConfig &config = {});
void AdamStep(AdamState *state, ModelParams *params, const Gradients &grads);

struct TrainConfig {
  int epochs = 200;
  size_t batch_size = 32;
  double learning_rate = 0.009;
  std::vector<size_t> hidden = {256, 128, 64};
  Activation activation = Activation::kRelu;
  uint64_t seed = 1;
  // Stop after this many epochs without a validation-loss improvement; 0 never stops.
  int patience = 0;
  bool shuffle = true;
};

struct LabeledRows {
  Eigen::MatrixXd features;  // one row per sample
  std::vector<int> labels;

  size_t size() const { return labels.size(); }
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double validation_loss = 0.0;
  double validation_accuracy = 0.0;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochStats> history;
  int best_epoch = 0;
};

// Mini-batch Adam training. Returns the parameters from the epoch with the
// lowest validation loss (training loss when there is no validation data).
TrainResult Train(const LabeledRows &train, const LabeledRows &validation,
                  const TrainConfig &config);

std::vector<int> Predict(const ModelParams &params, const Eigen::MatrixXd &rows);

// Versioned JSON with little-endian hex-encoded doubles.
std::string SerializeCheckpoint(const ModelParams &params,
                                const std::string &config_hash = "");
ModelParams ParseCheckpoint(const std::string &text);
void SaveCheckpoint(const ModelParams &params, const std::string &path,
                    const std::string &config_hash = "");
ModelParams LoadCheckpoint(const std::string &path);

}  // namespace interj

#endif  // INTERJ_MODEL_H_
