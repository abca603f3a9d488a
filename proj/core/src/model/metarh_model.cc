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

#include "metarh/model/metarh_model.h"

#include "metarh/model/background_encoder.h"
#include "metarh/model/relation_encoder.h"

namespace metarh::model {

using ad::Var;

MetaRHModel::MetaRHModel(const ModelConfig& config, std::size_t num_entities,
                         std::size_t num_relations, std::uint64_t seed)
    : config_(config), params_(config, num_entities, num_relations, seed) {}

Var MetaRHModel::EnhancedEntity(EntityId entity,
                                std::span<const FactIndex> sample,
                                const BackgroundIndex& background) const {
  std::vector<Var> reprs;
  if (config_.use_background) {
    reprs.reserve(sample.size());
    for (FactIndex id : sample) {
      reprs.push_back(
          EncodeBackgroundFact(background.fact(id), params_, config_));
    }
  }
  return Enhance(params_.entity(entity), reprs, params_.background, config_);
}

Var MetaRHModel::InstanceRelation(const HyperFact& fact,
                                  const sampler::FewShotTask& task,
                                  const BackgroundIndex& background,
                                  Rng* dropout_rng) const {
  auto enhanced = [&](EntityId e) {
    auto it = task.background_sample.find(e);
    std::span<const FactIndex> sample;
    if (it != task.background_sample.end()) sample = it->second;
    return EnhancedEntity(e, sample, background);
  };
  std::vector<QualifierVars> qualifiers;
  qualifiers.reserve(fact.qualifiers.size());
  for (const Qualifier& q : fact.qualifiers) {
    Var value = config_.enhance_values ? enhanced(q.value)
                                       : params_.entity(q.value);
    qualifiers.emplace_back(params_.relation(q.attribute), value);
  }
  InstanceGraph graph = BuildInstanceGraph(
      enhanced(fact.head), params_.mask_token, enhanced(fact.tail), qualifiers);
  GranOptions options;
  options.heads = config_.gran_heads;
  options.hard_mask = config_.hard_mask;
  options.dropout = config_.dropout;
  options.dropout_rng = dropout_rng;
  return GranForward(graph, params_.gran, options);
}

Var MetaRHModel::RelationRepresentation(const sampler::FewShotTask& task,
                                        const BackgroundIndex& background,
                                        Rng* dropout_rng) const {
  std::vector<Var> reprs;
  reprs.reserve(task.support.size());
  for (const HyperFact& fact : task.support) {
    reprs.push_back(InstanceRelation(fact, task, background, dropout_rng));
  }
  return AverageSupport(reprs);
}

ScoredInstance MetaRHModel::Instance(const HyperFact& fact,
                                     std::span<const EntityId> negatives) const {
  ScoredInstance instance;
  instance.head = params_.entity(fact.head);
  instance.tail = params_.entity(fact.tail);
  instance.qualifiers = FactQualifiers(fact, params_);
  for (EntityId e : negatives) instance.negative_tails.push_back(params_.entity(e));
  return instance;
}

MetaRHModel::TaskOutput MetaRHModel::Forward(const sampler::FewShotTask& task,
                                             const BackgroundIndex& background,
                                             Rng* dropout_rng) const {
  TaskOutput out;
  out.relation = RelationRepresentation(task, background, dropout_rng);

  std::vector<ScoredInstance> support;
  for (std::size_t j = 0; j < task.support.size(); ++j) {
    support.push_back(Instance(task.support[j], task.support_negatives.at(j)));
  }
  out.support_loss = MarginLoss(support, out.relation, config_.tau,
                                params_.scorer_w2, config_.margin);
  if (config_.use_adjustment) {
    out.adjusted = Adjust(out.relation, out.support_loss, config_.beta,
                          config_.first_order)
                       .adjusted;
  } else {
    out.adjusted = out.relation;
  }

  std::vector<ScoredInstance> queries;
  for (std::size_t j = 0; j < task.queries.size(); ++j) {
    queries.push_back(Instance(task.queries[j], task.query_negatives.at(j)));
  }
  out.query_loss = MarginLoss(queries, out.adjusted, config_.tau,
                              params_.scorer_w2, config_.margin);
  return out;
}

Eigen::VectorXd MetaRHModel::AdaptRelation(const sampler::FewShotTask& task,
                                           const BackgroundIndex& background) const {
  ad::Matrix relation_value;
  {
    ad::NoGradGuard no_grad;
    relation_value = RelationRepresentation(task, background, nullptr).value();
  }
  if (!config_.use_adjustment || config_.beta == 0.0) return relation_value;

  // Only dL/dr_T is needed: everything but r_T enters as a constant.
  Var relation = ad::Parameter(relation_value);
  std::vector<ScoredInstance> support;
  {
    ad::NoGradGuard no_grad;
    for (std::size_t j = 0; j < task.support.size(); ++j) {
      support.push_back(Instance(task.support[j], task.support_negatives.at(j)));
    }
  }
  Var w2 = ad::Detach(params_.scorer_w2);
  Var loss = MarginLoss(support, relation, config_.tau, w2, config_.margin);
  return Adjust(relation, loss, config_.beta, /*first_order=*/true)
      .adjusted.value();
}

std::vector<double> MetaRHModel::ScoreCandidates(
    const HyperFact& query, const Eigen::VectorXd& adapted,
    std::span<const EntityId> candidates) const {
  Eigen::VectorXd qualifiers;
  {
    ad::NoGradGuard no_grad;
    qualifiers = FactQualifiers(query, params_).value();
  }
  Eigen::VectorXd fused = config_.tau * adapted;
  if (config_.tau != 1.0) {
    fused += (1.0 - config_.tau) * (params_.scorer_w2.value() * qualifiers);
  }
  const Eigen::VectorXd base = params_.entity(query.head).value() + fused;
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (EntityId e : candidates) {
    scores.push_back((base - params_.entity(e).value()).norm());
  }
  return scores;
}

}  // namespace metarh::model
