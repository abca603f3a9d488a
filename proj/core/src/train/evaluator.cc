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

#include "metarh/train/evaluator.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <thread>

#include "metarh/model/meta_scorer.h"

namespace metarh::train {

std::vector<int> RankQueries(const model::MetaRHModel& model,
                             const KnowledgeStore& store,
                             const sampler::FewShotTask& episode, int threads) {
  const Eigen::VectorXd adapted =
      model.AdaptRelation(episode, store.background());
  std::span<const EntityId> candidates = store.Candidates(episode.relation);
  std::vector<int> ranks(episode.queries.size(), 0);

  auto rank_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const HyperFact& query = episode.queries[i];
      std::vector<double> scores =
          model.ScoreCandidates(query, adapted, candidates);
      ranks[i] = model::RankCandidates(candidates, scores, query.tail,
                                       store.KnownTails(query))
                     .rank;
    }
  };

  const std::size_t n = ranks.size();
  const std::size_t workers =
      std::min<std::size_t>(std::max(threads, 1), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    rank_range(0, n);
    return ranks;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(rank_range, begin, end);
  }
  pool.clear();  // joins
  return ranks;
}

EvalReport Evaluate(const model::MetaRHModel& model, const KnowledgeStore& store,
                    std::span<const Task> tasks, const EvalOptions& options) {
  std::vector<RelationReport> per_relation;
  for (const Task& task : tasks) {
    if (task.facts.size() <= static_cast<std::size_t>(options.episode.k)) {
      spdlog::warn("skipping relation '{}': {} facts, k={}",
                   store.vocab().RelationSymbol(task.relation),
                   task.facts.size(), options.episode.k);
      continue;
    }
    sampler::FewShotTask episode =
        sampler::EvaluationEpisode(store, task, options.episode, options.seed);
    RelationReport report;
    report.relation = store.vocab().RelationSymbol(task.relation);
    report.ranks = RankQueries(model, store, episode, options.threads);
    per_relation.push_back(std::move(report));
  }
  return Aggregate(std::move(per_relation), options.macro);
}

}  // namespace metarh::train
