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

#ifndef METARH_TRAIN_EVALUATOR_H_
#define METARH_TRAIN_EVALUATOR_H_

#include <cstdint>
#include <span>
#include <vector>

#include "metarh/hkg/knowledge_store.h"
#include "metarh/model/metarh_model.h"
#include "metarh/sampler/episode_sampler.h"
#include "metarh/train/metrics.h"

namespace metarh::train {

struct EvalOptions {
  sampler::EpisodeConfig episode;  // k, L and support negatives
  std::uint64_t seed = 0;          // fixes background samples and negatives
  bool macro = false;
  int threads = 1;                 // parallel over queries
};

// Filtered rank of every query of one evaluation episode.
std::vector<int> RankQueries(const model::MetaRHModel& model,
                             const KnowledgeStore& store,
                             const sampler::FewShotTask& episode, int threads);

// For each task: supports are its first k facts, r_T is adjusted once, every
// remaining fact is ranked. Tasks with at most k facts are skipped.
EvalReport Evaluate(const model::MetaRHModel& model, const KnowledgeStore& store,
                    std::span<const Task> tasks, const EvalOptions& options);

}  // namespace metarh::train

#endif  // METARH_TRAIN_EVALUATOR_H_
