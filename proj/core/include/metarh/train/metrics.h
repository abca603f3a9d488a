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

#ifndef METARH_TRAIN_METRICS_H_
#define METARH_TRAIN_METRICS_H_

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace metarh::train {

struct RankingMetrics {
  double mrr = 0.0;
  double hits1 = 0.0;
  double hits5 = 0.0;
  double hits10 = 0.0;
  std::size_t num_queries = 0;

  nlohmann::ordered_json ToJson() const;
};

// Means of 1/rank and [rank <= k] over 1-based ranks. Empty input yields
// all zeros.
RankingMetrics ComputeMetrics(std::span<const int> ranks);

struct RelationReport {
  std::string relation;
  RankingMetrics metrics;
  std::vector<int> ranks;
};

struct EvalReport {
  RankingMetrics overall;
  bool macro = false;  // overall = mean of per-relation metrics
  std::vector<RelationReport> per_relation;

  // Hits@1 <= Hits@5 <= Hits@10, Hits@1 <= MRR <= 1; raises an evaluation
  // error otherwise.
  void CheckInvariants() const;
  nlohmann::ordered_json ToJson() const;
};

// Aggregates per-relation ranks micro (over queries) or macro (over relations).
EvalReport Aggregate(std::vector<RelationReport> per_relation, bool macro);

}  // namespace metarh::train

#endif  // METARH_TRAIN_METRICS_H_
