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

#ifndef METARH_HKG_KNOWLEDGE_STORE_H_
#define METARH_HKG_KNOWLEDGE_STORE_H_

#include <array>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "metarh/hkg/background_index.h"
#include "metarh/hkg/fact.h"
#include "metarh/hkg/vocabulary.h"

namespace metarh {

enum class Split { kTrain = 0, kValid = 1, kTest = 2 };

std::string_view SplitName(Split split);
Split ParseSplit(std::string_view name);

// One few-shot relation and its facts in dataset order. At evaluation time
// the first k facts are the support set.
struct Task {
  RelationId relation{};
  std::vector<HyperFact> facts;
};

// Everything a model run reads: vocabulary, few-shot tasks per split, the
// inverse-augmented background index, candidate sets and known true tails.
// Immutable after construction.
class KnowledgeStore {
 public:
  using CandidateMap = std::map<RelationId, std::vector<EntityId>>;

  // Loads a directory written by the dataset builder.
  static KnowledgeStore Load(const std::filesystem::path& dir);

  // `raw_background` is not yet inverse-augmented. Runs the leakage check.
  static KnowledgeStore Assemble(Vocabulary vocab,
                                 std::array<std::vector<Task>, 3> tasks,
                                 const std::vector<HyperFact>& raw_background,
                                 CandidateMap candidates);

  const Vocabulary& vocab() const { return vocab_; }
  const std::vector<Task>& tasks(Split split) const {
    return tasks_[static_cast<int>(split)];
  }
  const Task* FindTask(RelationId relation) const;
  const BackgroundIndex& background() const { return background_; }

  // Candidate entities for a relation; every entity when none were stored.
  std::span<const EntityId> Candidates(RelationId relation) const;

  // Every tail observed in few-shot data for (head, relation, qualifiers).
  std::span<const EntityId> KnownTails(const HyperFact& fact) const;

  const std::set<RelationId>& few_shot_relations() const {
    return few_shot_relations_;
  }

 private:
  Vocabulary vocab_;
  std::array<std::vector<Task>, 3> tasks_;
  BackgroundIndex background_;
  CandidateMap candidates_;
  std::vector<EntityId> all_entities_;
  std::unordered_map<TailQueryKey, std::vector<EntityId>, TailQueryKeyHash>
      known_tails_;
  std::set<RelationId> few_shot_relations_;
};

}  // namespace metarh

#endif  // METARH_HKG_KNOWLEDGE_STORE_H_
