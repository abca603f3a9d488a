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

#ifndef METARH_SAMPLER_EPISODE_SAMPLER_H_
#define METARH_SAMPLER_EPISODE_SAMPLER_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "metarh/common/rng.h"
#include "metarh/hkg/background_index.h"
#include "metarh/hkg/fact.h"
#include "metarh/hkg/knowledge_store.h"

namespace metarh::sampler {

struct EpisodeConfig {
  int k = 5;                  // support instances
  int query_batch = 3;        // queries per training episode
  int max_background = 10;    // L: background facts per entity
  int num_negatives = 1;      // corrupted tails per positive
  // Also sample background for qualifier values of support facts.
  bool sample_value_background = false;
};

// One few-shot relation's support set, queries, corrupted tails and sampled
// background facts for the support entities.
struct FewShotTask {
  RelationId relation{};
  std::vector<HyperFact> support;
  std::vector<HyperFact> queries;
  std::vector<std::vector<EntityId>> support_negatives;
  std::vector<std::vector<EntityId>> query_negatives;
  std::map<EntityId, std::vector<FactIndex>> background_sample;
};

// `num_negatives` draws (with replacement) from candidates minus the known
// true tails. Throws a corruption error if nothing is left to draw from.
std::vector<EntityId> CorruptTail(const HyperFact& fact,
                                  std::span<const EntityId> candidates,
                                  std::span<const EntityId> known_true_tails,
                                  int num_negatives, Rng& rng);

// Up to `limit` background facts headed by `entity`, without replacement.
std::vector<FactIndex> SampleBackground(const BackgroundIndex& background,
                                        EntityId entity, int limit, Rng& rng);

// Training episode: k supports drawn uniformly without replacement, a query
// batch from the rest, filtered negatives for both, background samples for
// every support head and tail. Requires more than k facts.
FewShotTask SampleEpisode(const KnowledgeStore& store, const Task& task,
                          const EpisodeConfig& config, Rng& rng);

// Same, with the random stream fixed by (seed, task index, episode index).
FewShotTask SampleEpisode(const KnowledgeStore& store, const Task& task,
                          const EpisodeConfig& config, std::uint64_t seed,
                          std::uint64_t task_index,
                          std::uint64_t episode_index);

// Evaluation episode: the first k facts support, all remaining facts are
// queries. Only supports get negatives (for the adjustment step). Background
// samples and negatives depend only on (seed, relation).
FewShotTask EvaluationEpisode(const KnowledgeStore& store, const Task& task,
                              const EpisodeConfig& config, std::uint64_t seed);

}  // namespace metarh::sampler

#endif  // METARH_SAMPLER_EPISODE_SAMPLER_H_
