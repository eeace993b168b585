// Copyright 2026 The numprobe Authors
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

#ifndef NUMPROBE_PROBE_H_
#define NUMPROBE_PROBE_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "numprobe/embedding_io.h"

namespace numprobe {

enum class Activation { kRelu, kTanh };

std::string_view ActivationName(Activation a);
Activation ParseActivation(std::string_view name);

struct ProbeConfig {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 256;
  Activation activation = Activation::kRelu;
  int epochs = 20;
  double learning_rate = 1e-5;
  std::size_t batch_size = 32;
  // Adam moment decay rates and denominator guard.
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 1;

  // Throws UsageError on epochs < 1, learning_rate <= 0, batch_size < 1,
  // a zero dimension, or moment rates outside [0, 1).
  void Validate() const;

  bool operator==(const ProbeConfig&) const = default;
};

inline constexpr std::size_t kNumClasses = 2;

// Single-hidden-layer perceptron: softmax(W2 act(W1 x + b1) + b2).
// Weights are row-major: w1 is hidden x input, w2 is 2 x hidden.
struct ProbeModel {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  Activation activation = Activation::kRelu;
  std::vector<double> w1, b1, w2, b2;

  // Zero-initialized parameters of the right shapes.
  static ProbeModel Zeros(std::size_t input_dim, std::size_t hidden_dim,
                          Activation activation);
  // He-uniform (ReLU) or Glorot-uniform (tanh) weights, zero biases.
  static ProbeModel Init(const ProbeConfig& config);

  std::size_t num_parameters() const {
    return w1.size() + b1.size() + w2.size() + b2.size();
  }
  bool AllFinite() const;

  // Flat views over all parameters, in w1, b1, w2, b2 order.
  std::vector<double*> Parameters();

  bool operator==(const ProbeModel&) const = default;
};

using ProbeGradients = ProbeModel;

// Class probabilities. Throws DimensionError on a size mismatch.
std::array<double, kNumClasses> Forward(const ProbeModel& model,
                                        std::span<const float> x);
std::array<double, kNumClasses> Forward(const ProbeModel& model,
                                        std::span<const double> x);

struct LossAndGrad {
  double loss = 0.0;  // mean cross-entropy over the batch
  ProbeGradients grad;
};

// Mean cross-entropy and its gradient over the rows `indices` of `data`.
// Throws UsageError on an empty batch, DimensionError on a dim mismatch.
LossAndGrad ComputeLossAndGrad(const ProbeModel& model, const EmbeddingSet& data,
                               std::span<const std::size_t> indices);
LossAndGrad ComputeLossAndGrad(const ProbeModel& model,
                               const EmbeddingSet& data);

// Mean cross-entropy over the whole set, no gradient.
double MeanLoss(const ProbeModel& model, const EmbeddingSet& data);

// Argmax class; ties go to class 0.
int Predict(const ProbeModel& model, std::span<const float> x);

// Fraction of argmax-correct predictions. Throws UsageError on an empty set.
double Evaluate(const ProbeModel& model, const EmbeddingSet& data);

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;  // mean minibatch loss over the epoch
  double val_accuracy = 0.0;

  bool operator==(const EpochStats&) const = default;
};

struct TrainResult {
  ProbeModel model;  // snapshot with the best validation accuracy
  int best_epoch = 0;
  double best_val_accuracy = 0.0;
  double initial_train_loss = 0.0;
  std::vector<EpochStats> history;
};

// Seeded minibatch Adam over `train`, selecting the epoch with the best
// validation accuracy (earliest on ties). The inputs are never modified.
// Throws UsageError on empty sets or mismatched dims and TrainingError on a
// non-finite loss.
TrainResult TrainProbe(const EmbeddingSet& train, const EmbeddingSet& val,
                       const ProbeConfig& config);

// Checkpoint: JSON header line (architecture and training metadata) followed
// by w1, b1, w2, b2 as f64 little-endian.
struct Checkpoint {
  ProbeModel model;
  ProbeConfig config;
  int epochs_run = 0;
  int best_epoch = 0;
  std::string source_model;
  std::string dataset;

  bool operator==(const Checkpoint&) const = default;
};

std::string SerializeCheckpoint(const Checkpoint& ckpt);
Checkpoint ParseCheckpoint(std::string_view bytes);
void WriteCheckpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint ReadCheckpoint(const std::string& path);

}  // namespace numprobe

#endif  // NUMPROBE_PROBE_H_
