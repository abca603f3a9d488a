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

#include "metarh/train/metrics.h"

#include "metarh/common/error.h"

namespace metarh::train {

nlohmann::ordered_json RankingMetrics::ToJson() const {
  nlohmann::ordered_json j;
  j["MRR"] = mrr;
  j["Hits@1"] = hits1;
  j["Hits@5"] = hits5;
  j["Hits@10"] = hits10;
  j["queries"] = num_queries;
  return j;
}

RankingMetrics ComputeMetrics(std::span<const int> ranks) {
  RankingMetrics m;
  m.num_queries = ranks.size();
  if (ranks.empty()) return m;
  for (int rank : ranks) {
    if (rank < 1) throw Error(ErrorClass::kEvaluation, "ranks are 1-based");
    m.mrr += 1.0 / rank;
    m.hits1 += rank <= 1;
    m.hits5 += rank <= 5;
    m.hits10 += rank <= 10;
  }
  const double n = static_cast<double>(ranks.size());
  m.mrr /= n;
  m.hits1 /= n;
  m.hits5 /= n;
  m.hits10 /= n;
  return m;
}

void EvalReport::CheckInvariants() const {
  const RankingMetrics& m = overall;
  if (!(m.hits1 <= m.hits5 && m.hits5 <= m.hits10 && m.hits1 <= m.mrr &&
        m.mrr <= 1.0 && m.mrr >= 0.0)) {
    throw Error(ErrorClass::kEvaluation, "metric invariants violated");
  }
}

nlohmann::ordered_json EvalReport::ToJson() const {
  nlohmann::ordered_json j = overall.ToJson();
  j["averaging"] = macro ? "macro" : "micro";
  nlohmann::ordered_json rel = nlohmann::ordered_json::object();
  for (const RelationReport& r : per_relation) rel[r.relation] = r.metrics.ToJson();
  j["per_relation"] = std::move(rel);
  return j;
}

EvalReport Aggregate(std::vector<RelationReport> per_relation, bool macro) {
  EvalReport report;
  report.macro = macro;
  std::vector<int> all;
  for (RelationReport& r : per_relation) {
    r.metrics = ComputeMetrics(r.ranks);
    all.insert(all.end(), r.ranks.begin(), r.ranks.end());
  }
  if (!macro) {
    report.overall = ComputeMetrics(all);
  } else {
    RankingMetrics& m = report.overall;
    std::size_t used = 0;
    for (const RelationReport& r : per_relation) {
      if (r.ranks.empty()) continue;
      m.mrr += r.metrics.mrr;
      m.hits1 += r.metrics.hits1;
      m.hits5 += r.metrics.hits5;
      m.hits10 += r.metrics.hits10;
      ++used;
    }
    if (used > 0) {
      m.mrr /= used;
      m.hits1 /= used;
      m.hits5 /= used;
      m.hits10 /= used;
    }
    m.num_queries = all.size();
  }
  report.per_relation = std::move(per_relation);
  report.CheckInvariants();
  return report;
}

}  // namespace metarh::train
