/*
 * Copyright 2026 The MetaRH Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "metarh/autodiff/var.h"
#include "metarh/common/json_config.h"
#include "metarh/train/adam.h"
#include "metarh/train/checkpoint.h"
#include "metarh/train/evaluator.h"
#include "metarh/train/metrics.h"
#include "metarh/train/pretrained.h"
#include "metarh/train/train_config.h"
#include "metarh/train/trainer.h"
#include "test_support.h"

namespace metarh::train {
namespace {

using ad::Matrix;
using testing::ThrownClass;

std::filesystem::path TempPath(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("metarh_train_test_" + name);
}

TEST(MetricsTest, AnalyticExamples) {
  const std::vector<int> ranks{1, 2, 4};
  const RankingMetrics m = ComputeMetrics(ranks);
  EXPECT_DOUBLE_EQ(m.mrr, (1.0 + 0.5 + 0.25) / 3.0);
  EXPECT_DOUBLE_EQ(m.hits1, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.hits5, 1.0);
  EXPECT_DOUBLE_EQ(m.hits10, 1.0);
  EXPECT_EQ(m.num_queries, 3u);
  const std::vector<int> ones(7, 1);
  EXPECT_DOUBLE_EQ(ComputeMetrics(ones).mrr, 1.0);
  EXPECT_DOUBLE_EQ(ComputeMetrics(ones).hits1, 1.0);
  EXPECT_EQ(ComputeMetrics({}).num_queries, 0u);
  const std::vector<int> bad{1, 0};
  EXPECT_EQ(ThrownClass([&] { ComputeMetrics(bad); }), ErrorClass::kEvaluation);
}

TEST(MetricsTest, MicroAndMacroAggregation) {
  std::vector<RelationReport> per{{"a", {}, {1, 1, 1}}, {"b", {}, {10}}};
  const EvalReport micro = Aggregate(per, false);
  EXPECT_DOUBLE_EQ(micro.overall.mrr, (3.0 + 0.1) / 4.0);
  EXPECT_EQ(micro.overall.num_queries, 4u);
  EXPECT_DOUBLE_EQ(micro.per_relation[1].metrics.mrr, 0.1);
  const EvalReport macro = Aggregate(per, true);
  EXPECT_DOUBLE_EQ(macro.overall.mrr, (1.0 + 0.1) / 2.0);
  EXPECT_DOUBLE_EQ(macro.overall.hits1, 0.5);
  EXPECT_NO_THROW(micro.CheckInvariants());
  const auto json = micro.ToJson();
  EXPECT_DOUBLE_EQ(json.at("MRR").get<double>(), micro.overall.mrr);
  EXPECT_EQ(json.at("averaging"), "micro");
  EXPECT_EQ(json.at("per_relation").size(), 2u);

  EvalReport broken = micro;
  broken.overall.hits5 = 0.1;
  EXPECT_EQ(ThrownClass([&] { broken.CheckInvariants(); }), ErrorClass::kEvaluation);
}

TEST(AdamTest, MatchesHandComputedSteps) {
  ad::Var x = ad::Parameter((Matrix(2, 1) << 1.0, 2.0).finished());
  ad::Var untouched = ad::Parameter(Matrix::Constant(1, 1, 7.0));
  AdamConfig config;
  config.learning_rate = 0.1;
  Adam adam({x, untouched}, config);
  const std::vector<Matrix> grads{(Matrix(2, 1) << 0.5, -1.0).finished(),
                                  (Matrix(2, 1) << 0.2, 0.3).finished()};
  Matrix m = Matrix::Zero(2, 1), v = Matrix::Zero(2, 1), expected = x.value();
  for (int t = 1; t <= 2; ++t) {
    const Matrix& g = grads[t - 1];
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g.cwiseProduct(g);
    const Matrix mhat = m / (1 - std::pow(0.9, t));
    const Matrix vhat = v / (1 - std::pow(0.999, t));
    expected -= 0.1 * mhat.cwiseQuotient((vhat.cwiseSqrt().array() + 1e-8).matrix());
    ad::GradientMap map{{x.node(), g}};
    EXPECT_EQ(adam.Step(map), 1u);
    EXPECT_LT((x.value() - expected).cwiseAbs().maxCoeff(), 1e-15);
  }
  EXPECT_EQ(untouched.value()(0, 0), 7.0);
  EXPECT_EQ(adam.Step({}), 0u);
}

TEST(AdamTest, GroupLearningRates) {
  ad::Var a = ad::Parameter(Matrix::Zero(1, 1));
  ad::Var b = ad::Parameter(Matrix::Zero(1, 1));
  Adam adam(std::vector<ParamGroup>{{{a}, 0.1}, {{b}, 0.01}}, AdamConfig{});
  adam.Step({{a.node(), Matrix::Constant(1, 1, 1.0)}, {b.node(), Matrix::Constant(1, 1, 1.0)}});
  EXPECT_NEAR(a.value()(0, 0), -0.1, 1e-9);
  EXPECT_NEAR(b.value()(0, 0), -0.01, 1e-9);
}

TEST(TrainConfigTest, GridValidation) {
  TrainConfig config;
  EXPECT_NO_THROW(config.Validate());
  auto rejects = [](auto mutate) {
    TrainConfig c;
    mutate(c);
    const bool on_grid_rejects = ThrownClass([&] { c.Validate(); }) == ErrorClass::kConfig;
    c.allow_off_grid = true;
    return on_grid_rejects && !ThrownClass([&] { c.Validate(); }).has_value();
  };
  EXPECT_TRUE(rejects([](TrainConfig& c) { c.task_batch = 100; }));
  EXPECT_TRUE(rejects([](TrainConfig& c) { c.query_batch = 6; }));
  EXPECT_TRUE(rejects([](TrainConfig& c) { c.learning_rate = 0.01; }));
  EXPECT_TRUE(rejects([](TrainConfig& c) { c.max_background = 15; }));
  EXPECT_TRUE(rejects([](TrainConfig& c) { c.model.margin = 1.5; }));
  EXPECT_TRUE(rejects([](TrainConfig& c) { c.model.tau = 0.85; }));
  TrainConfig ok;
  ok.task_batch = 2048;
  ok.learning_rate = 1e-4;
  ok.max_background = 50;
  ok.model.margin = 5;
  ok.model.tau = 0.3;
  EXPECT_NO_THROW(ok.Validate());
  TrainConfig bad;
  bad.allow_off_grid = true;
  bad.num_negatives = 0;
  EXPECT_EQ(ThrownClass([&] { bad.Validate(); }), ErrorClass::kConfig);
}

TEST(TrainConfigTest, FlatJsonRoundTripAndOverrides) {
  TrainConfig config;
  config.model.dim = 12;
  config.model.first_order = true;
  config.seed = 77;
  config.pretrained_embeddings = "emb.jsonl";
  nlohmann::ordered_json j = config.ToJson();
  EXPECT_EQ(TrainConfig::FromJson(j).ToJson(), j);
  EXPECT_TRUE(j.contains("dim"));
  EXPECT_TRUE(j.contains("task_batch"));

  ApplyOverride(j, "dim", "16");
  ApplyOverride(j, "first_order", "false");
  ApplyOverride(j, "learning_rate", "5e-4");
  ApplyOverride(j, "entity_activation", "identity");
  const TrainConfig back = TrainConfig::FromJson(j);
  EXPECT_EQ(back.model.dim, 16);
  EXPECT_FALSE(back.model.first_order);
  EXPECT_DOUBLE_EQ(back.learning_rate, 5e-4);
  EXPECT_EQ(back.model.entity_activation, model::Activation::kIdentity);

  EXPECT_EQ(ThrownClass([&] { ApplyOverride(j, "no_such_key", "1"); }), ErrorClass::kConfig);
  EXPECT_EQ(ThrownClass([&] { ApplyOverride(j, "dim", "ten"); }), ErrorClass::kConfig);
  EXPECT_EQ(ThrownClass([&] { ApplyOverride(j, "first_order", "maybe"); }),
            ErrorClass::kConfig);
  EXPECT_EQ(ThrownClass([] { TrainConfig::FromJson({{"bogus", 1}}); }), ErrorClass::kConfig);
}

// Shared fixture: the lattice dataset and a tiny off-grid config.
class TrainerTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { store_ = new KnowledgeStore(testing::SyntheticStore()); }
  static void TearDownTestSuite() {
    delete store_;
    store_ = nullptr;
  }
  static TrainConfig TinyConfig() {
    TrainConfig c;
    c.allow_off_grid = true;
    c.model.dim = 8;
    c.task_batch = 4;
    c.query_batch = 2;
    c.learning_rate = 0.01;
    c.max_steps = 6;
    c.eval_every = 3;
    c.seed = 21;
    return c;
  }
  static KnowledgeStore* store_;
};

KnowledgeStore* TrainerTest::store_ = nullptr;

TEST_F(TrainerTest, IdenticalSeedsGiveIdenticalLossCurves) {
  Trainer a(*store_, TinyConfig());
  Trainer b(*store_, TinyConfig());
  const TrainResult ra = a.Train();
  const TrainResult rb = b.Train();
  ASSERT_EQ(ra.loss_curve.size(), 6u);
  EXPECT_EQ(ra.loss_curve, rb.loss_curve);
  EXPECT_EQ(ra.validations.size(), 2u);
  const auto sa = a.model().params().Snapshot(), sb = b.model().params().Snapshot();
  for (std::size_t i = 0; i < sa.size(); ++i) ASSERT_EQ(sa[i], sb[i]);

  TrainConfig other = TinyConfig();
  other.seed = 22;
  Trainer c(*store_, other);
  EXPECT_NE(c.Train().loss_curve, ra.loss_curve);
}

TEST_F(TrainerTest, ParallelModeMatchesUpToReductionOrder) {
  TrainConfig config = TinyConfig();
  config.max_steps = 3;
  Trainer serial(*store_, config);
  config.threads = 2;
  Trainer parallel(*store_, config);
  const auto a = serial.Train().loss_curve;
  const auto b = parallel.Train().loss_curve;
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-8 * (1 + a[i]));
}

TEST_F(TrainerTest, StepUpdatesParametersWhenLossIsPositive) {
  TrainConfig config = TinyConfig();
  config.model.margin = 5.0;
  Trainer trainer(*store_, config);
  const auto before = trainer.model().params().Snapshot();
  const double loss = trainer.Step(0);
  ASSERT_GT(loss, 0.0);
  const auto after = trainer.model().params().Snapshot();
  bool changed = false;
  for (std::size_t i = 0; i < before.size(); ++i) changed |= before[i] != after[i];
  EXPECT_TRUE(changed);
}

TEST_F(TrainerTest, EvaluationIsDeterministicAndThreadIndependent) {
  Trainer trainer(*store_, TinyConfig());
  trainer.Train();
  EvalOptions options = trainer.EvaluationOptions();
  const auto& tasks = store_->tasks(Split::kTrain);
  const EvalReport a = Evaluate(trainer.model(), *store_, tasks, options);
  options.threads = 3;
  const EvalReport b = Evaluate(trainer.model(), *store_, tasks, options);
  EXPECT_EQ(a.ToJson(), b.ToJson());
  EXPECT_EQ(a.per_relation.size(), tasks.size());
  std::size_t queries = 0;
  for (const Task& t : tasks) queries += t.facts.size() - 5;
  EXPECT_EQ(a.overall.num_queries, queries);
  EXPECT_NO_THROW(a.CheckInvariants());
}

TEST_F(TrainerTest, CheckpointRoundTrip) {
  Trainer trainer(*store_, TinyConfig());
  trainer.Train();
  const auto path = TempPath("roundtrip.ckpt");
  const std::uint64_t hash = store_->vocab().Fingerprint();
  SaveCheckpoint(path, trainer.model(), trainer.config(), hash, 6);
  LoadedModel loaded = LoadCheckpoint(path, hash);
  EXPECT_EQ(loaded.step, 6);
  EXPECT_EQ(loaded.config.ToJson(), trainer.config().ToJson());
  const auto sa = trainer.model().params().Snapshot();
  const auto sb = loaded.model->params().Snapshot();
  ASSERT_EQ(sa.size(), sb.size());
  for (std::size_t i = 0; i < sa.size(); ++i) ASSERT_EQ(sa[i], sb[i]);
  const auto& valid = store_->tasks(Split::kValid);
  EXPECT_EQ(Evaluate(trainer.model(), *store_, valid, trainer.EvaluationOptions()).overall.mrr,
            Evaluate(*loaded.model, *store_, valid, trainer.EvaluationOptions()).overall.mrr);

  EXPECT_EQ(ThrownClass([&] { LoadCheckpoint(path, hash + 1); }), ErrorClass::kLoad);

  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    bytes = s.str();
  }
  auto write = [&](const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << data;
  };
  std::string corrupt = bytes;
  corrupt.back() ^= 0x5a;
  write(corrupt);
  EXPECT_EQ(ThrownClass([&] { ReadCheckpoint(path); }), ErrorClass::kChecksum);
  corrupt = bytes;
  corrupt[bytes.size() / 2] ^= 0x01;
  write(corrupt);
  EXPECT_EQ(ThrownClass([&] { ReadCheckpoint(path); }), ErrorClass::kChecksum);
  write(bytes.substr(0, 10));
  EXPECT_TRUE(ThrownClass([&] { ReadCheckpoint(path); }).has_value());
  write("not a checkpoint at all");
  EXPECT_EQ(ThrownClass([&] { ReadCheckpoint(path); }), ErrorClass::kLoad);
  std::filesystem::remove(path);
}

class PretrainedTest : public ::testing::Test {
 protected:
  void SetUp() override {
    vocab.AddEntity("A");
    vocab.AddEntity("B");
    vocab.AddEntity("C");
    vocab.AddRelation("p");
    vocab.AddRelation("q");
    config.dim = 4;
    params = model::Parameters(config, 3, 2, 5);
  }
  std::filesystem::path Write(const std::string& content) {
    const auto path = TempPath("emb.jsonl");
    std::ofstream(path) << content;
    return path;
  }
  Vocabulary vocab;
  model::ModelConfig config;
  model::Parameters params;
};

TEST_F(PretrainedTest, EmptyFileKeepsRandomInit) {
  const Matrix before = params.entities.ToMatrix();
  const PretrainedCoverage c = LoadPretrainedEmbeddings(Write(""), vocab, params);
  EXPECT_DOUBLE_EQ(c.fraction(), 0.0);
  EXPECT_EQ(params.entities.ToMatrix(), before);
}

TEST_F(PretrainedTest, FullCoverage) {
  std::string file;
  for (const char* s : {"A", "B", "C", "p", "q"}) {
    file += std::string(R"({"symbol":")") + s + R"(","vec":[0.5,-1.25,3,)" +
            std::to_string(static_cast<int>(s[0])) + "]}\n";
  }
  const PretrainedCoverage c = LoadPretrainedEmbeddings(Write(file), vocab, params);
  EXPECT_DOUBLE_EQ(c.fraction(), 1.0);
  EXPECT_EQ(c.matched_entities, 3u);
  EXPECT_EQ(c.matched_relations, 2u);
  EXPECT_EQ(params.entity(EntityId{1}).value(),
            (Matrix(4, 1) << 0.5, -1.25, 3, 'B').finished());
  EXPECT_EQ(params.relation(RelationId{1}).value(),
            (Matrix(4, 1) << 0.5, -1.25, 3, 'q').finished());
}

TEST_F(PretrainedTest, PartialCoverageAndErrors) {
  const auto path = Write(R"({"symbol":"B","vec":[0.1,0.2,0.3,0.4]})"
                          "\n"
                          R"({"symbol":"unknown","vec":[1,1,1,1]})"
                          "\n");
  const Matrix before = params.entities.ToMatrix();
  const PretrainedCoverage c = LoadPretrainedEmbeddings(path, vocab, params);
  EXPECT_EQ(c.matched_entities, 1u);
  EXPECT_DOUBLE_EQ(c.fraction(), 1.0 / 5.0);
  const Matrix after = params.entities.ToMatrix();
  EXPECT_EQ(after.row(1), (Matrix(1, 4) << 0.1, 0.2, 0.3, 0.4).finished());
  EXPECT_EQ(after.row(0), before.row(0));
  EXPECT_EQ(after.row(2), before.row(2));
  EXPECT_LE(after.row(0).cwiseAbs().maxCoeff(), 0.5 / 4);

  EXPECT_EQ(ThrownClass([&] {
              LoadPretrainedEmbeddings(Write(R"({"symbol":"A","vec":[1,2]})"), vocab, params);
            }),
            ErrorClass::kConfig);
  EXPECT_EQ(ThrownClass([&] {
              LoadPretrainedEmbeddings(Write("{not json"), vocab, params);
            }),
            ErrorClass::kParse);
  std::filesystem::remove(TempPath("emb.jsonl"));
}

}  // namespace
}  // namespace metarh::train
