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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "numprobe/errors.h"
#include "numprobe/random.h"
#include "numprobe/synthetic.h"
#include "probe_oracle.h"
#include "test_util.h"

namespace numprobe {
namespace {

// W1 = [[1, -1], [0.5, 2]], b1 = [0, -1], W2 = [[1, 0], [-1, 1]], b2 = [0.5, 0].
ProbeModel HandModel(Activation act) {
  ProbeModel m = ProbeModel::Zeros(2, 2, act);
  m.w1 = {1.0, -1.0, 0.5, 2.0};
  m.b1 = {0.0, -1.0};
  m.w2 = {1.0, 0.0, -1.0, 1.0};
  m.b2 = {0.5, 0.0};
  return m;
}

// x = (2, 1): pre-activations (1, 2).
//   relu: logits (1.5, 1.0), p0 = 1 / (1 + e^-0.5)
//   tanh: logits (tanh 1 + 0.5, tanh 2 - tanh 1)
TEST(ForwardTest, HandComputedTwoTwoTwo) {
  const float x[] = {2.0f, 1.0f};
  const auto relu = Forward(HandModel(Activation::kRelu), x);
  EXPECT_NEAR(relu[0], 0.622459331201854564, 1e-12);
  EXPECT_NEAR(relu[1], 0.377540668798145435, 1e-12);
  const auto tanh = Forward(HandModel(Activation::kTanh), x);
  EXPECT_NEAR(tanh[0], 0.742530127401201137, 1e-12);
  EXPECT_NEAR(tanh[1], 0.257469872598798863, 1e-12);
}

TEST(ForwardTest, ZeroModelIsUniform) {
  const ProbeModel m = ProbeModel::Zeros(3, 4, Activation::kRelu);
  const float x[] = {5.0f, -1.0f, 100.0f};
  const auto p = Forward(m, x);
  EXPECT_EQ(p[0], 0.5);
  EXPECT_EQ(p[1], 0.5);
}

TEST(ForwardTest, ProbabilitiesNormalized) {
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    ProbeConfig cfg;
    cfg.input_dim = 1 + rng.Index(8);
    cfg.hidden_dim = 1 + rng.Index(8);
    cfg.activation = rng.Index(2) ? Activation::kTanh : Activation::kRelu;
    cfg.seed = rng.Next();
    ProbeModel m = ProbeModel::Init(cfg);
    for (double& b : m.b2) b = 40.0 * rng.Normal();
    std::vector<double> x(cfg.input_dim);
    for (double& v : x) v = 30.0 * rng.Normal();
    const auto p = Forward(m, std::span<const double>(x));
    ASSERT_GE(p[0], 0.0);
    ASSERT_GE(p[1], 0.0);
    ASSERT_NEAR(p[0] + p[1], 1.0, 1e-9);
  }
}

TEST(ForwardTest, DimensionMismatch) {
  const float x[] = {1.0f, 2.0f, 3.0f};
  EXPECT_THROW(Forward(HandModel(Activation::kRelu), x), DimensionError);
}

EmbeddingSet Records(std::size_t dim, const std::vector<std::pair<std::vector<float>, int>>& rows) {
  EmbeddingSet set(dim);
  std::uint64_t id = 0;
  for (const auto& [v, y] : rows) set.Add(id++, y, v);
  return set;
}

TEST(LossTest, UniformOutputCostsLnTwo) {
  const ProbeModel m = ProbeModel::Zeros(2, 3, Activation::kRelu);
  const EmbeddingSet data = Records(2, {{{1, 2}, 0}, {{3, 4}, 1}, {{0, 0}, 1}});
  EXPECT_NEAR(ComputeLossAndGrad(m, data).loss, std::log(2.0), 1e-15);
  EXPECT_NEAR(MeanLoss(m, data), std::log(2.0), 1e-15);
}

TEST(LossTest, ConfidentCorrectCostsNothing) {
  ProbeModel m = ProbeModel::Zeros(2, 3, Activation::kRelu);
  m.b2 = {60.0, -60.0};
  const EmbeddingSet data = Records(2, {{{1, 2}, 0}, {{3, 4}, 0}});
  const double loss = ComputeLossAndGrad(m, data).loss;
  EXPECT_GE(loss, 0.0);
  EXPECT_LT(loss, 1e-50);
  // Confidently wrong is large but finite.
  const EmbeddingSet wrong = Records(2, {{{1, 2}, 1}});
  EXPECT_NEAR(ComputeLossAndGrad(m, wrong).loss, 120.0, 1e-9);
}

TEST(LossTest, BatchPreconditions) {
  const ProbeModel m = ProbeModel::Zeros(2, 3, Activation::kRelu);
  const EmbeddingSet data = Records(2, {{{1, 2}, 0}});
  EXPECT_THROW(ComputeLossAndGrad(m, data, std::vector<std::size_t>{}), UsageError);
  EXPECT_THROW(ComputeLossAndGrad(m, Records(3, {{{1, 2, 3}, 0}})), DimensionError);
}

TEST(LossTest, MatchesIndependentOracle) {
  Rng rng(12);
  for (int draw = 0; draw < 20; ++draw) {
    ProbeConfig cfg;
    cfg.input_dim = 6;
    cfg.hidden_dim = 9;
    cfg.activation = draw % 2 ? Activation::kTanh : Activation::kRelu;
    cfg.seed = rng.Next();
    const ProbeModel m = ProbeModel::Init(cfg);
    const EmbeddingSet data = GaussianClusters(8, 6, 3.0, rng.Next());
    const std::vector<std::size_t> batch = {0, 2, 3, 5, 7};
    EXPECT_NEAR(ComputeLossAndGrad(m, data, batch).loss,
                static_cast<double>(testing::OracleLoss(m, data, batch)), 1e-12);
  }
}

TEST(GradientTest, MatchesCentralDifferences) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    EXPECT_LT(testing::MaxGradientError(seed, Activation::kRelu), 1e-4) << "relu seed " << seed;
    EXPECT_LT(testing::MaxGradientError(1000 + seed, Activation::kTanh), 1e-4) << "tanh seed " << seed;
  }
}

TEST(ConfigTest, Validation) {
  ProbeConfig cfg;
  cfg.input_dim = 4;
  EXPECT_NO_THROW(cfg.Validate());
  for (auto mutate : std::vector<void (*)(ProbeConfig&)>{
           [](ProbeConfig& c) { c.epochs = 0; },
           [](ProbeConfig& c) { c.learning_rate = 0; },
           [](ProbeConfig& c) { c.learning_rate = -1e-5; },
           [](ProbeConfig& c) { c.batch_size = 0; },
           [](ProbeConfig& c) { c.hidden_dim = 0; },
           [](ProbeConfig& c) { c.beta1 = 1.0; },
       }) {
    ProbeConfig bad = cfg;
    mutate(bad);
    EXPECT_THROW(bad.Validate(), UsageError);
  }
  EXPECT_EQ(ParseActivation("tanh"), Activation::kTanh);
  EXPECT_THROW(ParseActivation("gelu"), UsageError);
}

TEST(ConfigTest, Defaults) {
  const ProbeConfig cfg;
  EXPECT_EQ(cfg.hidden_dim, 256u);
  EXPECT_EQ(cfg.activation, Activation::kRelu);
  EXPECT_EQ(cfg.epochs, 20);
  EXPECT_EQ(cfg.learning_rate, 1e-5);
  EXPECT_EQ(cfg.batch_size, 32u);
}

TEST(InitTest, SeededAndBounded) {
  ProbeConfig cfg;
  cfg.input_dim = 24;
  const ProbeModel a = ProbeModel::Init(cfg);
  EXPECT_EQ(a, ProbeModel::Init(cfg));
  cfg.seed = 2;
  EXPECT_NE(a, ProbeModel::Init(cfg));
  const double limit = std::sqrt(6.0 / 24.0);
  for (double w : a.w1) EXPECT_LE(std::abs(w), limit);
  for (double b : a.b1) EXPECT_EQ(b, 0.0);
  EXPECT_EQ(a.num_parameters(), 256u * 24 + 256 + 2 * 256 + 2);
}

TEST(EvaluateTest, Examples) {
  ProbeModel ones = ProbeModel::Zeros(1, 2, Activation::kRelu);
  ones.b2 = {0.0, 1.0};  // always predicts 1
  EXPECT_EQ(Evaluate(ones, Records(1, {{{0}, 1}, {{1}, 1}})), 1.0);
  EXPECT_EQ(Evaluate(ones, Records(1, {{{0}, 0}, {{1}, 0}})), 0.0);
  EXPECT_EQ(Evaluate(ones, Records(1, {{{0}, 1}, {{1}, 1}, {{2}, 0}, {{3}, 1}})), 0.75);
  EXPECT_THROW(Evaluate(ones, EmbeddingSet(1)), UsageError);
  EXPECT_THROW(Evaluate(ones, Records(2, {{{0, 0}, 1}})), DimensionError);
}

TEST(EvaluateTest, TiesGoToClassZero) {
  const ProbeModel zero = ProbeModel::Zeros(1, 2, Activation::kRelu);
  const float x[] = {3.0f};
  EXPECT_EQ(Predict(zero, x), 0);
  EXPECT_EQ(Evaluate(zero, Records(1, {{{0}, 0}, {{1}, 1}})), 0.5);
}

struct Synthetic {
  EmbeddingSet train, val;
};

Synthetic Separable(std::uint64_t seed) {
  return {GaussianClusters(10'000, 16, 10.0, seed, 0),
          GaussianClusters(2'000, 16, 10.0, seed, 100'000)};
}

TEST(TrainTest, SeparableClustersAreLearned) {
  const Synthetic s = Separable(1);
  ProbeConfig cfg;
  cfg.input_dim = 16;
  const TrainResult r = TrainProbe(s.train, s.val, cfg);
  ASSERT_EQ(r.history.size(), 20u);
  EXPECT_GE(r.best_val_accuracy, 0.99);
  EXPECT_LT(r.history.back().train_loss, r.initial_train_loss);
  EXPECT_EQ(Evaluate(r.model, s.val), r.best_val_accuracy);
  EXPECT_EQ(r.history[r.best_epoch - 1].val_accuracy, r.best_val_accuracy);
  EXPECT_TRUE(r.model.AllFinite());
}

TEST(TrainTest, RandomLabelsStayAtChance) {
  const Synthetic s = Separable(2);
  ProbeConfig cfg;
  cfg.input_dim = 16;
  const TrainResult r = TrainProbe(RandomizeLabels(s.train, 3), RandomizeLabels(s.val, 4), cfg);
  EXPECT_GE(r.best_val_accuracy, 0.45);
  EXPECT_LE(r.best_val_accuracy, 0.55);
}

TEST(TrainTest, DeterministicAndInputsUntouched) {
  const EmbeddingSet train = GaussianClusters(1'000, 8, 4.0, 9, 0);
  const EmbeddingSet val = GaussianClusters(200, 8, 4.0, 9, 5'000);
  const EmbeddingSet train_copy = train, val_copy = val;
  ProbeConfig cfg;
  cfg.input_dim = 8;
  cfg.hidden_dim = 32;
  cfg.epochs = 5;
  const TrainResult a = TrainProbe(train, val, cfg);
  const TrainResult b = TrainProbe(train, val, cfg);
  EXPECT_EQ(a.model, b.model);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_EQ(a.history[i].train_loss, b.history[i].train_loss);
    EXPECT_EQ(a.history[i].val_accuracy, b.history[i].val_accuracy);
  }
  EXPECT_EQ(train, train_copy);
  EXPECT_EQ(val, val_copy);
  cfg.seed = 2;
  EXPECT_NE(TrainProbe(train, val, cfg).model, a.model);
}

TEST(TrainTest, RejectsBadInputs) {
  const EmbeddingSet train = GaussianClusters(10, 4, 4.0, 1, 0);
  ProbeConfig cfg;
  cfg.input_dim = 4;
  EXPECT_THROW(TrainProbe(EmbeddingSet(4), train, cfg), UsageError);
  EXPECT_THROW(TrainProbe(train, EmbeddingSet(4), cfg), UsageError);
  EXPECT_THROW(TrainProbe(train, GaussianClusters(10, 5, 4.0, 1, 0), cfg), DimensionError);
  cfg.epochs = 0;
  EXPECT_THROW(TrainProbe(train, train, cfg), UsageError);
}

TEST(TrainTest, DivergenceAborts) {
  const EmbeddingSet train = GaussianClusters(64, 4, 4.0, 1, 0);
  ProbeConfig cfg;
  cfg.input_dim = 4;
  cfg.learning_rate = 1e300;
  EXPECT_THROW(TrainProbe(train, train, cfg), TrainingError);
}

TEST(CheckpointTest, RoundTripIsExact) {
  ProbeConfig cfg;
  cfg.input_dim = 5;
  cfg.hidden_dim = 7;
  cfg.activation = Activation::kTanh;
  cfg.learning_rate = 3e-4;
  cfg.seed = 77;
  Checkpoint ckpt;
  ckpt.model = ProbeModel::Init(cfg);
  ckpt.model.b2 = {0.1, -1.0 / 3.0};
  ckpt.config = cfg;
  ckpt.epochs_run = 20;
  ckpt.best_epoch = 13;
  ckpt.source_model = "bert-base-multilingual-cased";
  ckpt.dataset = "da_task2_bare_train.tsv";
  const Checkpoint back = ParseCheckpoint(SerializeCheckpoint(ckpt));
  EXPECT_EQ(back.model, ckpt.model);
  EXPECT_EQ(back.config, ckpt.config);
  EXPECT_EQ(back.epochs_run, 20);
  EXPECT_EQ(back.best_epoch, 13);
  EXPECT_EQ(back.source_model, ckpt.source_model);
  EXPECT_EQ(back.dataset, ckpt.dataset);

  testing::TempDir dir("ckpt");
  WriteCheckpoint(ckpt, dir.file("m.bin"));
  EXPECT_EQ(ReadCheckpoint(dir.file("m.bin")).model, ckpt.model);
}

TEST(CheckpointTest, RejectsMalformed) {
  ProbeConfig cfg;
  cfg.input_dim = 2;
  cfg.hidden_dim = 2;
  Checkpoint ckpt;
  ckpt.model = ProbeModel::Init(cfg);
  ckpt.config = cfg;
  const std::string good = SerializeCheckpoint(ckpt);
  EXPECT_THROW(ParseCheckpoint(good.substr(0, good.size() - 1)), FormatError);
  EXPECT_THROW(ParseCheckpoint("{}\n"), FormatError);
  EXPECT_THROW(ParseCheckpoint("garbage"), FormatError);
  // An embedding file is not a checkpoint.
  EXPECT_THROW(ParseCheckpoint(SerializeEmbeddings(GaussianClusters(2, 2, 1.0, 1))), FormatError);
}

}  // namespace
}  // namespace numprobe
