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

#include "numprobe/probe.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "numprobe/errors.h"
#include "numprobe/random.h"

namespace numprobe {
namespace {

constexpr std::uint64_t kShuffleStream = 0x9E3779B97F4A7C15ULL;

double Activate(Activation a, double x) {
  return a == Activation::kRelu ? (x > 0.0 ? x : 0.0) : std::tanh(x);
}

// Derivative expressed through the pre-activation and the activation value.
double ActivateGrad(Activation a, double pre, double post) {
  return a == Activation::kRelu ? (pre > 0.0 ? 1.0 : 0.0) : 1.0 - post * post;
}

struct Activations {
  std::vector<double> pre;
  std::vector<double> hidden;
  std::array<double, kNumClasses> logits;
};

template <typename T>
void ForwardInto(const ProbeModel& m, std::span<const T> x, Activations& act) {
  if (x.size() != m.input_dim) {
    throw DimensionError("input has dimension " + std::to_string(x.size()) +
                         ", model expects " + std::to_string(m.input_dim));
  }
  const std::size_t d = m.input_dim;
  const std::size_t h = m.hidden_dim;
  act.pre.resize(h);
  act.hidden.resize(h);
  for (std::size_t j = 0; j < h; ++j) {
    const double* row = m.w1.data() + j * d;
    double z = m.b1[j];
    for (std::size_t k = 0; k < d; ++k) z += row[k] * static_cast<double>(x[k]);
    act.pre[j] = z;
    act.hidden[j] = Activate(m.activation, z);
  }
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const double* row = m.w2.data() + c * h;
    double z = m.b2[c];
    for (std::size_t j = 0; j < h; ++j) z += row[j] * act.hidden[j];
    act.logits[c] = z;
  }
}

std::array<double, kNumClasses> Softmax(const std::array<double, kNumClasses>& z) {
  const double top = std::max(z[0], z[1]);
  const double e0 = std::exp(z[0] - top);
  const double e1 = std::exp(z[1] - top);
  const double sum = e0 + e1;
  return {e0 / sum, e1 / sum};
}

// -log softmax(z)[label], computed without forming the probabilities.
double CrossEntropy(const std::array<double, kNumClasses>& z, int label) {
  const double top = std::max(z[0], z[1]);
  const double lse = top + std::log(std::exp(z[0] - top) + std::exp(z[1] - top));
  return lse - z[label];
}

void CheckDims(const ProbeModel& model, const EmbeddingSet& data) {
  if (data.dim() != model.input_dim) {
    throw DimensionError("embeddings have dimension " +
                         std::to_string(data.dim()) + ", model expects " +
                         std::to_string(model.input_dim));
  }
}

void FillUniform(std::vector<double>& v, double limit, Rng& rng) {
  for (double& x : v) x = (2.0 * rng.UniformReal() - 1.0) * limit;
}

}  // namespace

std::string_view ActivationName(Activation a) {
  return a == Activation::kRelu ? "relu" : "tanh";
}

Activation ParseActivation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  throw UsageError("unknown activation '" + std::string(name) + "'");
}

void ProbeConfig::Validate() const {
  if (input_dim == 0 || hidden_dim == 0) {
    throw UsageError("probe dimensions must be positive");
  }
  if (epochs < 1) throw UsageError("epochs must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw UsageError("learning rate must be > 0");
  }
  if (batch_size < 1) throw UsageError("minibatch size must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) ||
      !(epsilon > 0.0)) {
    throw UsageError("adam moments must lie in [0, 1) and epsilon > 0");
  }
}

ProbeModel ProbeModel::Zeros(std::size_t input_dim, std::size_t hidden_dim,
                             Activation activation) {
  ProbeModel m;
  m.input_dim = input_dim;
  m.hidden_dim = hidden_dim;
  m.activation = activation;
  m.w1.assign(hidden_dim * input_dim, 0.0);
  m.b1.assign(hidden_dim, 0.0);
  m.w2.assign(kNumClasses * hidden_dim, 0.0);
  m.b2.assign(kNumClasses, 0.0);
  return m;
}

ProbeModel ProbeModel::Init(const ProbeConfig& config) {
  config.Validate();
  ProbeModel m = Zeros(config.input_dim, config.hidden_dim, config.activation);
  Rng rng(config.seed);
  const auto fan_in1 = static_cast<double>(config.input_dim);
  const auto fan_in2 = static_cast<double>(config.hidden_dim);
  if (config.activation == Activation::kRelu) {
    FillUniform(m.w1, std::sqrt(6.0 / fan_in1), rng);
  } else {
    FillUniform(m.w1, std::sqrt(6.0 / (fan_in1 + fan_in2)), rng);
  }
  FillUniform(m.w2, std::sqrt(6.0 / (fan_in2 + kNumClasses)), rng);
  return m;
}

bool ProbeModel::AllFinite() const {
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  return finite(w1) && finite(b1) && finite(w2) && finite(b2);
}

std::vector<double*> ProbeModel::Parameters() {
  std::vector<double*> out;
  out.reserve(num_parameters());
  for (auto* v : {&w1, &b1, &w2, &b2}) {
    for (double& x : *v) out.push_back(&x);
  }
  return out;
}

std::array<double, kNumClasses> Forward(const ProbeModel& model,
                                        std::span<const float> x) {
  Activations act;
  ForwardInto(model, x, act);
  return Softmax(act.logits);
}

std::array<double, kNumClasses> Forward(const ProbeModel& model,
                                        std::span<const double> x) {
  Activations act;
  ForwardInto(model, x, act);
  return Softmax(act.logits);
}

LossAndGrad ComputeLossAndGrad(const ProbeModel& model, const EmbeddingSet& data,
                               std::span<const std::size_t> indices) {
  if (indices.empty()) throw UsageError("empty minibatch");
  CheckDims(model, data);
  const std::size_t d = model.input_dim;
  const std::size_t h = model.hidden_dim;
  const double scale = 1.0 / static_cast<double>(indices.size());

  LossAndGrad out;
  out.grad = ProbeModel::Zeros(d, h, model.activation);
  auto& g = out.grad;
  Activations act;
  std::vector<double> dpre(h);
  for (std::size_t i : indices) {
    const auto x = data.vector(i);
    const int y = data.label(i);
    ForwardInto(model, x, act);
    out.loss += CrossEntropy(act.logits, y);

    const auto p = Softmax(act.logits);
    std::array<double, kNumClasses> dz = {p[0] * scale, p[1] * scale};
    dz[y] -= scale;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      g.b2[c] += dz[c];
      double* row = g.w2.data() + c * h;
      for (std::size_t j = 0; j < h; ++j) row[j] += dz[c] * act.hidden[j];
    }
    for (std::size_t j = 0; j < h; ++j) {
      const double dh = model.w2[j] * dz[0] + model.w2[h + j] * dz[1];
      dpre[j] = dh * ActivateGrad(model.activation, act.pre[j], act.hidden[j]);
    }
    for (std::size_t j = 0; j < h; ++j) {
      if (dpre[j] == 0.0) continue;
      g.b1[j] += dpre[j];
      double* row = g.w1.data() + j * d;
      for (std::size_t k = 0; k < d; ++k) row[k] += dpre[j] * static_cast<double>(x[k]);
    }
  }
  out.loss *= scale;
  return out;
}

LossAndGrad ComputeLossAndGrad(const ProbeModel& model, const EmbeddingSet& data) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), 0);
  return ComputeLossAndGrad(model, data, all);
}

double MeanLoss(const ProbeModel& model, const EmbeddingSet& data) {
  if (data.empty()) throw UsageError("empty embedding set");
  CheckDims(model, data);
  Activations act;
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    ForwardInto(model, data.vector(i), act);
    sum += CrossEntropy(act.logits, data.label(i));
  }
  return sum / static_cast<double>(data.size());
}

int Predict(const ProbeModel& model, std::span<const float> x) {
  Activations act;
  ForwardInto(model, x, act);
  return act.logits[1] > act.logits[0] ? 1 : 0;
}

double Evaluate(const ProbeModel& model, const EmbeddingSet& data) {
  if (data.empty()) throw UsageError("empty evaluation set");
  CheckDims(model, data);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (Predict(model, data.vector(i)) == data.label(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

TrainResult TrainProbe(const EmbeddingSet& train, const EmbeddingSet& val,
                       const ProbeConfig& base_config) {
  if (train.empty() || val.empty()) {
    throw UsageError("training and validation sets must be non-empty");
  }
  ProbeConfig config = base_config;
  if (config.input_dim == 0) config.input_dim = train.dim();
  if (train.dim() != config.input_dim || val.dim() != config.input_dim) {
    throw DimensionError("train/val dimensions " + std::to_string(train.dim()) +
                         "/" + std::to_string(val.dim()) +
                         " do not match probe input " +
                         std::to_string(config.input_dim));
  }
  config.Validate();

  ProbeModel model = ProbeModel::Init(config);
  Rng rng(config.seed ^ kShuffleStream);

  TrainResult result;
  result.initial_train_loss = MeanLoss(model, train);
  result.model = model;
  result.best_val_accuracy = -1.0;

  const std::size_t n_params = model.num_parameters();
  std::vector<double> m(n_params, 0.0);
  std::vector<double> v(n_params, 0.0);
  std::vector<double*> params = model.Parameters();
  double beta1_t = 1.0;
  double beta2_t = 1.0;

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.Shuffle(order);
    double loss_sum = 0.0;
    std::size_t batch_no = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batch_no) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const std::span<const std::size_t> batch(order.data() + start, end - start);
      LossAndGrad lg = ComputeLossAndGrad(model, train, batch);
      if (!std::isfinite(lg.loss)) {
        throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) +
                            ", batch " + std::to_string(batch_no));
      }
      loss_sum += lg.loss * static_cast<double>(batch.size());

      beta1_t *= config.beta1;
      beta2_t *= config.beta2;
      const double step = config.learning_rate * std::sqrt(1.0 - beta2_t) / (1.0 - beta1_t);
      std::size_t p = 0;
      for (const auto* g : {&lg.grad.w1, &lg.grad.b1, &lg.grad.w2, &lg.grad.b2}) {
        for (double gi : *g) {
          m[p] = config.beta1 * m[p] + (1.0 - config.beta1) * gi;
          v[p] = config.beta2 * v[p] + (1.0 - config.beta2) * gi * gi;
          *params[p] -= step * m[p] / (std::sqrt(v[p]) + config.epsilon);
          ++p;
        }
      }
    }
    if (!model.AllFinite()) {
      throw TrainingError("non-finite parameters after epoch " + std::to_string(epoch));
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(train.size());
    stats.val_accuracy = Evaluate(model, val);
    result.history.push_back(stats);
    if (stats.val_accuracy > result.best_val_accuracy) {
      result.best_val_accuracy = stats.val_accuracy;
      result.best_epoch = epoch;
      result.model = model;
    }
  }
  return result;
}

std::string SerializeCheckpoint(const Checkpoint& ckpt) {
  const ProbeModel& m = ckpt.model;
  nlohmann::ordered_json header;
  header["kind"] = "probe_model";
  header["dtype"] = "f64le";
  header["input_dim"] = m.input_dim;
  header["hidden_dim"] = m.hidden_dim;
  header["output_dim"] = kNumClasses;
  header["count"] = m.num_parameters();
  header["activation"] = ActivationName(m.activation);
  header["epochs"] = ckpt.config.epochs;
  header["learning_rate"] = ckpt.config.learning_rate;
  header["batch_size"] = ckpt.config.batch_size;
  header["beta1"] = ckpt.config.beta1;
  header["beta2"] = ckpt.config.beta2;
  header["epsilon"] = ckpt.config.epsilon;
  header["seed"] = ckpt.config.seed;
  header["epochs_run"] = ckpt.epochs_run;
  header["best_epoch"] = ckpt.best_epoch;
  header["source_model"] = ckpt.source_model;
  header["dataset"] = ckpt.dataset;
  std::string out = header.dump();
  out += '\n';
  for (const auto* v : {&m.w1, &m.b1, &m.w2, &m.b2}) {
    for (double x : *v) le::PutF64(out, x);
  }
  return out;
}

Checkpoint ParseCheckpoint(std::string_view bytes) {
  const auto newline = bytes.find('\n');
  if (newline == std::string_view::npos) {
    throw FormatError("checkpoint has no header line");
  }
  Checkpoint ckpt;
  try {
    const auto header = nlohmann::json::parse(bytes.substr(0, newline));
    if (header.at("kind").get<std::string>() != "probe_model" ||
        header.at("dtype").get<std::string>() != "f64le" ||
        header.at("output_dim").get<std::size_t>() != kNumClasses) {
      throw FormatError("not a probe checkpoint", 1);
    }
    auto& c = ckpt.config;
    c.input_dim = header.at("input_dim").get<std::size_t>();
    c.hidden_dim = header.at("hidden_dim").get<std::size_t>();
    c.activation = ParseActivation(header.at("activation").get<std::string>());
    c.epochs = header.at("epochs").get<int>();
    c.learning_rate = header.at("learning_rate").get<double>();
    c.batch_size = header.at("batch_size").get<std::size_t>();
    c.beta1 = header.at("beta1").get<double>();
    c.beta2 = header.at("beta2").get<double>();
    c.epsilon = header.at("epsilon").get<double>();
    c.seed = header.at("seed").get<std::uint64_t>();
    ckpt.epochs_run = header.at("epochs_run").get<int>();
    ckpt.best_epoch = header.at("best_epoch").get<int>();
    ckpt.source_model = header.value("source_model", "");
    ckpt.dataset = header.value("dataset", "");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad checkpoint header: ") + e.what(), 1);
  } catch (const UsageError& e) {
    throw FormatError(std::string("bad checkpoint header: ") + e.what(), 1);
  }
  const auto& c = ckpt.config;
  if (c.input_dim == 0 || c.hidden_dim == 0) {
    throw DimensionError("checkpoint dimensions must be positive");
  }
  ckpt.model = ProbeModel::Zeros(c.input_dim, c.hidden_dim, c.activation);
  const std::string_view body = bytes.substr(newline + 1);
  if (body.size() != 8 * ckpt.model.num_parameters()) {
    throw FormatError("checkpoint body is " + std::to_string(body.size()) +
                      " bytes, expected " +
                      std::to_string(8 * ckpt.model.num_parameters()));
  }
  const auto* p = reinterpret_cast<const unsigned char*>(body.data());
  for (double* x : ckpt.model.Parameters()) {
    *x = le::GetF64(p);
    p += 8;
  }
  if (!ckpt.model.AllFinite()) throw FormatError("checkpoint has non-finite weights");
  return ckpt;
}

void WriteCheckpoint(const Checkpoint& ckpt, const std::string& path) {
  WriteFileBytes(path, SerializeCheckpoint(ckpt));
}

Checkpoint ReadCheckpoint(const std::string& path) {
  try {
    return ParseCheckpoint(ReadFileBytes(path));
  } catch (const DimensionError& e) {
    throw DimensionError(path + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace numprobe
