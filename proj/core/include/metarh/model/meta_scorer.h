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

#ifndef METARH_MODEL_META_SCORER_H_
#define METARH_MODEL_META_SCORER_H_

#include <span>
#include <utility>
#include <vector>

#include "metarh/autodiff/var.h"
#include "metarh/hkg/fact.h"
#include "metarh/model/background_encoder.h"

namespace metarh::model {

// ||h + r - t||_2 as a 1 x 1 value; lower is more plausible.
ad::Var Score(const ad::Var& head, const ad::Var& relation, const ad::Var& tail);

// One positive instance with its corrupted tails, all as raw embeddings.
struct ScoredInstance {
  ad::Var head;
  ad::Var qualifiers;  // qualifier sum of the instance
  ad::Var tail;
  std::vector<ad::Var> negative_tails;
};

// sum over instances and negatives of max(0, margin + f(pos) - f(neg)), where
// each instance scores with fuse(relation, its qualifiers).
ad::Var MarginLoss(std::span<const ScoredInstance> instances,
                   const ad::Var& relation, double tau, const ad::Var& w2,
                   double margin);

struct Adjustment {
  ad::Var adjusted;  // r_T - beta * dL/dr_T
  ad::Var gradient;  // dL/dr_T
};

// One gradient step on the support loss with respect to `relation`. The
// gradient stays differentiable unless `first_order` is set. Non-finite
// gradients raise a numeric error.
Adjustment Adjust(const ad::Var& relation, const ad::Var& support_loss,
                  double beta, bool first_order);

struct RankResult {
  int rank = 0;  // 1-based, ties counted against the true tail
  std::vector<std::pair<EntityId, double>> ranking;  // ascending score
};

// Filtered ranking: other known true tails are dropped before ranking.
// `scores[i]` belongs to `candidates[i]`. The true tail must be a candidate.
RankResult RankCandidates(std::span<const EntityId> candidates,
                          std::span<const double> scores, EntityId true_tail,
                          std::span<const EntityId> known_true_tails);

}  // namespace metarh::model

#endif  // METARH_MODEL_META_SCORER_H_
