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

#ifndef METARH_MODEL_METARH_MODEL_H_
#define METARH_MODEL_METARH_MODEL_H_

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "metarh/autodiff/var.h"
#include "metarh/common/rng.h"
#include "metarh/hkg/background_index.h"
#include "metarh/model/config.h"
#include "metarh/model/meta_scorer.h"
#include "metarh/model/parameters.h"
#include "metarh/sampler/episode_sampler.h"

namespace metarh::model {

// Background encoder + relation encoder + meta scorer over one parameter set.
class MetaRHModel {
 public:
  MetaRHModel(const ModelConfig& config, std::size_t num_entities,
              std::size_t num_relations, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  Parameters& params() { return params_; }
  const Parameters& params() const { return params_; }

  ad::Var EnhancedEntity(EntityId entity, std::span<const FactIndex> sample,
                         const BackgroundIndex& background) const;

  // MASK output of the relation encoder for one support instance.
  ad::Var InstanceRelation(const HyperFact& fact,
                           const sampler::FewShotTask& task,
                           const BackgroundIndex& background,
                           Rng* dropout_rng) const;

  // r_T: mean MASK output over the support set.
  ad::Var RelationRepresentation(const sampler::FewShotTask& task,
                                 const BackgroundIndex& background,
                                 Rng* dropout_rng) const;

  // Raw-embedding instance for the scorer.
  ScoredInstance Instance(const HyperFact& fact,
                          std::span<const EntityId> negatives) const;

  struct TaskOutput {
    ad::Var relation;      // r_T
    ad::Var support_loss;  // L(S_r) at r_T
    ad::Var adjusted;      // r_T'
    ad::Var query_loss;    // L(Q_r) at r_T'
  };

  // Full differentiable pass over one training episode.
  TaskOutput Forward(const sampler::FewShotTask& task,
                     const BackgroundIndex& background,
                     Rng* dropout_rng = nullptr) const;

  // r_T' for inference; requires support negatives in `task`.
  Eigen::VectorXd AdaptRelation(const sampler::FewShotTask& task,
                                const BackgroundIndex& background) const;

  // ||h + fuse(r', q) - c|| for every candidate c.
  std::vector<double> ScoreCandidates(const HyperFact& query,
                                      const Eigen::VectorXd& adapted,
                                      std::span<const EntityId> candidates) const;

 private:
  ModelConfig config_;
  Parameters params_;
};

}  // namespace metarh::model

#endif  // METARH_MODEL_METARH_MODEL_H_
