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

#include "metarh/sampler/episode_sampler.h"

#include <algorithm>
#include <string>

#include "metarh/common/error.h"

namespace metarh::sampler {
namespace {

void SampleSupportBackground(const KnowledgeStore& store,
                             const EpisodeConfig& config, FewShotTask& task,
                             Rng& rng) {
  for (const HyperFact& fact : task.support) {
    for (EntityId entity : {fact.head, fact.tail}) {
      if (task.background_sample.contains(entity)) continue;
      task.background_sample[entity] = SampleBackground(
          store.background(), entity, config.max_background, rng);
    }
    if (!config.sample_value_background) continue;
    for (const Qualifier& q : fact.qualifiers) {
      if (task.background_sample.contains(q.value)) continue;
      task.background_sample[q.value] = SampleBackground(
          store.background(), q.value, config.max_background, rng);
    }
  }
}

}  // namespace

std::vector<EntityId> CorruptTail(const HyperFact& fact,
                                  std::span<const EntityId> candidates,
                                  std::span<const EntityId> known_true_tails,
                                  int num_negatives, Rng& rng) {
  std::vector<EntityId> pool;
  pool.reserve(candidates.size());
  for (EntityId e : candidates) {
    if (e == fact.tail) continue;
    if (std::find(known_true_tails.begin(), known_true_tails.end(), e) !=
        known_true_tails.end()) {
      continue;
    }
    pool.push_back(e);
  }
  if (pool.empty()) {
    throw Error(ErrorClass::kCorruption,
                "no candidate left to corrupt the tail with");
  }
  std::vector<EntityId> negatives;
  negatives.reserve(num_negatives);
  for (int i = 0; i < num_negatives; ++i) {
    negatives.push_back(pool[rng.UniformIndex(pool.size())]);
  }
  return negatives;
}

std::vector<FactIndex> SampleBackground(const BackgroundIndex& background,
                                        EntityId entity, int limit, Rng& rng) {
  std::span<const FactIndex> bucket = background.FactsOf(entity);
  std::vector<FactIndex> out;
  if (limit <= 0) return out;
  for (std::size_t pick : rng.SampleWithoutReplacement(bucket.size(), limit)) {
    out.push_back(bucket[pick]);
  }
  return out;
}

FewShotTask SampleEpisode(const KnowledgeStore& store, const Task& task,
                          const EpisodeConfig& config, Rng& rng) {
  const std::size_t k = static_cast<std::size_t>(config.k);
  if (config.k < 1 || task.facts.size() <= k) {
    throw Error(ErrorClass::kEpisode,
                "relation '" + store.vocab().RelationSymbol(task.relation) +
                    "' has " + std::to_string(task.facts.size()) +
                    " facts; an episode needs more than k=" +
                    std::to_string(config.k));
  }
  FewShotTask episode;
  episode.relation = task.relation;
  std::vector<std::size_t> order =
      rng.SampleWithoutReplacement(task.facts.size(), task.facts.size());
  for (std::size_t i = 0; i < k; ++i) episode.support.push_back(task.facts[order[i]]);
  const std::size_t query_count =
      std::min<std::size_t>(std::max(config.query_batch, 1), order.size() - k);
  for (std::size_t i = 0; i < query_count; ++i) {
    episode.queries.push_back(task.facts[order[k + i]]);
  }

  std::span<const EntityId> candidates = store.Candidates(task.relation);
  for (const HyperFact& fact : episode.support) {
    episode.support_negatives.push_back(CorruptTail(
        fact, candidates, store.KnownTails(fact), config.num_negatives, rng));
  }
  for (const HyperFact& fact : episode.queries) {
    episode.query_negatives.push_back(CorruptTail(
        fact, candidates, store.KnownTails(fact), config.num_negatives, rng));
  }
  SampleSupportBackground(store, config, episode, rng);
  return episode;
}

FewShotTask SampleEpisode(const KnowledgeStore& store, const Task& task,
                          const EpisodeConfig& config, std::uint64_t seed,
                          std::uint64_t task_index,
                          std::uint64_t episode_index) {
  Rng rng(MixSeed(seed, task_index, episode_index));
  return SampleEpisode(store, task, config, rng);
}

FewShotTask EvaluationEpisode(const KnowledgeStore& store, const Task& task,
                              const EpisodeConfig& config, std::uint64_t seed) {
  const std::size_t k = static_cast<std::size_t>(config.k);
  if (config.k < 1 || task.facts.size() <= k) {
    throw Error(ErrorClass::kEpisode,
                "relation '" + store.vocab().RelationSymbol(task.relation) +
                    "' has too few facts for k=" + std::to_string(config.k));
  }
  FewShotTask episode;
  episode.relation = task.relation;
  episode.support.assign(task.facts.begin(), task.facts.begin() + k);
  episode.queries.assign(task.facts.begin() + k, task.facts.end());
  Rng rng(MixSeed(seed, 0xe7a1ULL, Index(task.relation)));
  SampleSupportBackground(store, config, episode, rng);
  std::span<const EntityId> candidates = store.Candidates(task.relation);
  for (const HyperFact& fact : episode.support) {
    episode.support_negatives.push_back(CorruptTail(
        fact, candidates, store.KnownTails(fact), config.num_negatives, rng));
  }
  return episode;
}

}  // namespace metarh::sampler
