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

#ifndef METARH_DATASET_BUILDER_H_
#define METARH_DATASET_BUILDER_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <vector>

#include "json.hpp"
#include "metarh/hkg/fact.h"
#include "metarh/hkg/knowledge_store.h"
#include "metarh/hkg/vocabulary.h"

namespace metarh::dataset {

struct BuildConfig {
  int min_instances = 20;
  int max_instances = 1000;
  std::array<double, 3> split_fractions{0.85, 0.05, 0.10};
  std::uint64_t rng_seed = 0;
  std::size_t max_candidates = 1000;

  // Throws a config error on violated bounds.
  void Validate() const;

  nlohmann::ordered_json ToJson() const;
  // Missing keys keep their defaults; unknown keys are rejected.
  static BuildConfig FromJson(const nlohmann::json& json);
};

struct TaskSplit {
  std::vector<RelationId> train;
  std::vector<RelationId> valid;
  std::vector<RelationId> test;
};

// Table-1 style statistics. Qualifier value/attribute counts are reported
// twice: over few-shot data only and over few-shot plus background data.
struct DatasetStats {
  std::size_t num_entities = 0;
  std::size_t num_relations = 0;
  std::size_t num_qualifier_values_few_shot = 0;
  std::size_t num_qualifier_attributes_few_shot = 0;
  std::size_t num_qualifier_values_all = 0;
  std::size_t num_qualifier_attributes_all = 0;
  std::size_t num_background_facts = 0;
  double background_hyper_rate = 0.0;
  std::size_t num_few_shot_facts = 0;
  double few_shot_hyper_rate = 0.0;
  std::size_t num_tasks = 0;

  nlohmann::ordered_json ToJson() const;
};

// Relations whose primary-position instance count lies in [min, max].
std::set<RelationId> SelectFewShotRelations(
    const std::vector<HyperFact>& corpus, const BuildConfig& config);

// Facts of few-shot relations, minus those carrying a few-shot relation as a
// qualifier attribute.
std::vector<HyperFact> ExtractFewShotData(
    const std::vector<HyperFact>& corpus,
    const std::set<RelationId>& few_shot_relations);

// Corpus facts mentioning (in any position) an entity of the few-shot data,
// minus facts that use a few-shot relation anywhere.
std::vector<HyperFact> ExtractBackgroundData(
    const std::vector<HyperFact>& corpus,
    const std::vector<HyperFact>& few_shot_data,
    const std::set<RelationId>& few_shot_relations);

// Seeded shuffle of the relations, then valid/test sizes round(f * n) floored
// at 1 and the remainder to train.
TaskSplit SplitTasks(const std::set<RelationId>& few_shot_relations,
                     const BuildConfig& config);

// Sizes SplitTasks would produce for n relations.
std::array<std::size_t, 3> SplitSizes(std::size_t n,
                                      const std::array<double, 3>& fractions);

// Type-proxy closure: an entity's proxy is the set of relations it is a tail
// of; candidates(r) are entities whose proxy meets the proxies of r's tails,
// capped by descending degree, always including r's true tails. Lists are
// sorted by id.
std::map<RelationId, std::vector<EntityId>> BuildCandidateSets(
    const std::vector<HyperFact>& few_shot_data,
    const std::vector<HyperFact>& background, std::size_t max_candidates);

DatasetStats ComputeStats(const std::vector<HyperFact>& few_shot_data,
                          const std::vector<HyperFact>& background,
                          std::size_t num_tasks);

// Output of a full build, re-keyed onto a compact vocabulary that holds only
// symbols used by the dataset (plus inverse partners of background
// relations).
struct BuiltDataset {
  Vocabulary vocab;
  std::array<std::vector<Task>, 3> tasks;
  std::vector<HyperFact> background;  // not inverse-augmented
  std::map<RelationId, std::vector<EntityId>> candidates;
  DatasetStats stats;
};

BuiltDataset BuildDataset(const std::vector<HyperFact>& corpus,
                          const Vocabulary& corpus_vocab,
                          const BuildConfig& config);

// Writes background.jsonl, tasks/{train,valid,test}.json, candidates.json,
// stats.json and vocab.json under `dir`.
void WriteDataset(const BuiltDataset& built, const std::filesystem::path& dir);

}  // namespace metarh::dataset

#endif  // METARH_DATASET_BUILDER_H_
