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

#include "metarh/model/meta_scorer.h"

#include <algorithm>
#include <cmath>

#include "metarh/common/error.h"

namespace metarh::model {

using ad::Var;

Var Score(const Var& head, const Var& relation, const Var& tail) {
  return ad::Norm(ad::Sub(ad::Add(head, relation), tail));
}

Var MarginLoss(std::span<const ScoredInstance> instances, const Var& relation,
               double tau, const Var& w2, double margin) {
  Var total = ad::Scalar(0.0);
  for (const ScoredInstance& instance : instances) {
    Var fused = FuseRelation(relation, instance.qualifiers, tau, w2);
    Var positive = Score(instance.head, fused, instance.tail);
    for (const Var& negative_tail : instance.negative_tails) {
      Var negative = Score(instance.head, fused, negative_tail);
      total = ad::Add(total,
                      ad::Relu(ad::AddScalar(ad::Sub(positive, negative), margin)));
    }
  }
  return total;
}

Adjustment Adjust(const Var& relation, const Var& support_loss, double beta,
                  bool first_order) {
  std::vector<Var> grads =
      ad::Grad(support_loss, std::span<const Var>(&relation, 1), !first_order);
  Var gradient = first_order ? ad::Detach(grads[0]) : grads[0];
  if (!gradient.value().allFinite()) {
    throw Error(ErrorClass::kNumeric, "non-finite support-loss gradient");
  }
  if (beta == 0.0) return {relation, gradient};
  return {ad::Sub(relation, ad::Scale(gradient, beta)), gradient};
}

RankResult RankCandidates(std::span<const EntityId> candidates,
                          std::span<const double> scores, EntityId true_tail,
                          std::span<const EntityId> known_true_tails) {
  if (candidates.size() != scores.size()) {
    throw Error(ErrorClass::kEvaluation, "one score per candidate required");
  }
  RankResult result;
  double true_score = 0.0;
  bool found = false;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const EntityId e = candidates[i];
    if (e == true_tail) {
      true_score = scores[i];
      found = true;
      continue;
    }
    if (std::find(known_true_tails.begin(), known_true_tails.end(), e) !=
        known_true_tails.end()) {
      continue;
    }
    result.ranking.emplace_back(e, scores[i]);
  }
  if (!found) {
    throw Error(ErrorClass::kEvaluation, "true tail is not among the candidates");
  }
  int better_or_equal = 0;
  for (const auto& [e, s] : result.ranking) {
    if (!(s > true_score)) ++better_or_equal;
  }
  result.rank = better_or_equal + 1;
  result.ranking.emplace_back(true_tail, true_score);
  // Pessimistic ties: the true tail goes after equal-scored candidates.
  std::stable_sort(result.ranking.begin(), result.ranking.end(),
                   [&](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second < b.second;
                     return a.first != true_tail && b.first == true_tail;
                   });
  return result;
}

}  // namespace metarh::model
