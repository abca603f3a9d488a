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

#include <vector>

#include "metarh/autodiff/var.h"
#include "metarh/model/metarh_model.h"
#include "metarh/sampler/episode_sampler.h"
#include "test_support.h"

namespace metarh::model {
namespace {

using ad::Matrix;
using ad::Var;

class ModelTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { store_ = new KnowledgeStore(testing::SyntheticStore()); }
  static void TearDownTestSuite() {
    delete store_;
    store_ = nullptr;
  }

  static ModelConfig SmallConfig() {
    ModelConfig config;
    config.dim = 8;
    config.beta = 0.5;
    return config;
  }
  static sampler::FewShotTask Episode(std::uint64_t index) {
    sampler::EpisodeConfig ec;
    ec.num_negatives = 2;
    return sampler::SampleEpisode(*store_, store_->tasks(Split::kTrain)[index % 17], ec,
                                  5, index, 0);
  }
  static MetaRHModel Model(const ModelConfig& config) {
    return MetaRHModel(config, store_->vocab().num_entities(),
                       store_->vocab().num_relations(), 3);
  }

  static KnowledgeStore* store_;
};

KnowledgeStore* ModelTest::store_ = nullptr;

TEST_F(ModelTest, SameSeedSameParameters) {
  const MetaRHModel a = Model(SmallConfig());
  const MetaRHModel b = Model(SmallConfig());
  const auto sa = a.params().Snapshot(), sb = b.params().Snapshot();
  ASSERT_EQ(sa.size(), sb.size());
  for (std::size_t i = 0; i < sa.size(); ++i) EXPECT_EQ(sa[i], sb[i]);
}

TEST_F(ModelTest, EmbeddingInitWithinBounds) {
  const MetaRHModel m = Model(SmallConfig());
  const double bound = 0.5 / 8.0;
  EXPECT_LE(m.params().entities.ToMatrix().cwiseAbs().maxCoeff(), bound);
  EXPECT_LE(m.params().relations.ToMatrix().cwiseAbs().maxCoeff(), bound);
}

TEST_F(ModelTest, SupportOrderInvariance) {
  const MetaRHModel m = Model(SmallConfig());
  sampler::FewShotTask ep = Episode(1);
  const Matrix base = m.RelationRepresentation(ep, store_->background(), nullptr).value();
  std::reverse(ep.support.begin(), ep.support.end());
  EXPECT_LT((m.RelationRepresentation(ep, store_->background(), nullptr).value() - base)
                .cwiseAbs().maxCoeff(), 1e-6);
}

TEST_F(ModelTest, AblationSwitches) {
  ModelConfig config = SmallConfig();
  config.use_adjustment = false;
  const MetaRHModel no_adj = Model(config);
  const sampler::FewShotTask ep = Episode(2);
  const auto out = no_adj.Forward(ep, store_->background());
  EXPECT_EQ(out.adjusted.value(), out.relation.value());
  EXPECT_EQ(no_adj.AdaptRelation(ep, store_->background()),
            Eigen::VectorXd(out.relation.value()));

  // beta = 0 with first-order on is the identity adjustment.
  config = SmallConfig();
  config.beta = 0.0;
  config.first_order = true;
  const MetaRHModel zero_beta = Model(config);
  const auto out0 = zero_beta.Forward(ep, store_->background());
  EXPECT_EQ(out0.adjusted.value(), out0.relation.value());

  // Without background the enhanced entity is act(e) whatever the sample.
  config = SmallConfig();
  config.use_background = false;
  const MetaRHModel no_bg = Model(config);
  const EntityId head = ep.support[0].head;
  const auto& sample = ep.background_sample.at(head);
  EXPECT_EQ(no_bg.EnhancedEntity(head, sample, store_->background()).value(),
            Matrix(no_bg.params().entity(head).value().array().tanh()));
}

TEST_F(ModelTest, InferenceAdaptationMatchesTrainingForward) {
  const MetaRHModel m = Model(SmallConfig());
  const sampler::FewShotTask ep = Episode(3);
  const auto out = m.Forward(ep, store_->background());
  ASSERT_GT(out.support_loss.item(), 0.0);
  const Eigen::VectorXd adapted = m.AdaptRelation(ep, store_->background());
  EXPECT_LT((adapted - out.adjusted.value()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GT((adapted - out.relation.value()).norm(), 0.0);

  const HyperFact& q = ep.queries[0];
  const auto candidates = store_->Candidates(ep.relation);
  const std::vector<double> scores = m.ScoreCandidates(q, adapted, candidates);
  ASSERT_EQ(scores.size(), candidates.size());
  const Var fused = FuseRelation(ad::Constant(adapted), FactQualifiers(q, m.params()),
                                 m.config().tau, m.params().scorer_w2);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    EXPECT_NEAR(scores[i],
                Score(m.params().entity(q.head), fused, m.params().entity(candidates[i])).item(),
                1e-12);
  }
}

TEST_F(ModelTest, QueryLossReachesEveryParameterGroup) {
  ModelConfig config = SmallConfig();
  config.margin = 5.0;  // keeps every hinge active
  const MetaRHModel m = Model(config);
  const sampler::FewShotTask ep = Episode(4);
  const auto out = m.Forward(ep, store_->background());
  ad::GradientMap grads;
  ad::BackwardInto(out.query_loss, grads);
  for (const NamedTensor& t : m.params().DenseTensors()) {
    ASSERT_TRUE(grads.contains(t.var.node())) << t.name;
    EXPECT_GT(grads.at(t.var.node()).norm(), 0.0) << t.name;
  }
  EXPECT_TRUE(grads.contains(m.params().entity(ep.queries[0].head).node()));
}

TEST_F(ModelTest, LeavesAreUniqueAndRestorable) {
  MetaRHModel m = Model(SmallConfig());
  std::set<const ad::Node*> seen;
  for (const Var& leaf : m.params().Leaves()) EXPECT_TRUE(seen.insert(leaf.node()).second);
  const auto snapshot = m.params().Snapshot();
  m.params().mask_token.mutable_leaf_value().setConstant(3.0);
  m.params().Restore(snapshot);
  EXPECT_EQ(m.params().Snapshot()[0], snapshot[0]);
  EXPECT_EQ(m.params().mask_token.value(),
            snapshot[m.params().entities.size() + m.params().relations.size()]);
}

}  // namespace
}  // namespace metarh::model
