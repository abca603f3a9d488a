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

#include "metarh/hkg/knowledge_store.h"

#include <algorithm>

#include "metarh/common/error.h"
#include "metarh/hkg/fact_io.h"

namespace metarh {

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValid:
      return "valid";
    case Split::kTest:
      return "test";
  }
  return "train";
}

Split ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "valid") return Split::kValid;
  if (name == "test") return Split::kTest;
  throw Error(ErrorClass::kConfig, "unknown split '" + std::string(name) + "'");
}

KnowledgeStore KnowledgeStore::Load(const std::filesystem::path& dir) {
  Vocabulary vocab = Vocabulary::FromJson(ReadJsonFile(dir / "vocab.json"));
  const std::size_t entities = vocab.num_entities();
  const std::size_t relations = vocab.num_relations();

  std::array<std::vector<Task>, 3> tasks;
  for (Split split : {Split::kTrain, Split::kValid, Split::kTest}) {
    const auto path = dir / "tasks" / (std::string(SplitName(split)) + ".json");
    nlohmann::json json = ReadJsonFile(path);
    if (!json.is_object()) {
      throw Error(ErrorClass::kSchema, path.string() + ": expected an object");
    }
    for (const auto& [symbol, records] : json.items()) {
      Task task;
      task.relation = vocab.AddRelation(symbol);
      for (const auto& record : records) {
        HyperFact fact = FactFromJson(record, vocab);
        if (fact.relation != task.relation) {
          throw Error(ErrorClass::kConsistency,
                      path.string() + ": fact filed under '" + symbol +
                          "' uses relation '" +
                          vocab.RelationSymbol(fact.relation) + "'");
        }
        task.facts.push_back(std::move(fact));
      }
      tasks[static_cast<int>(split)].push_back(std::move(task));
    }
  }

  std::vector<HyperFact> background =
      ReadFactsFile(dir / "background.jsonl", vocab);

  CandidateMap candidates;
  nlohmann::json candidate_json = ReadJsonFile(dir / "candidates.json");
  for (const auto& [symbol, list] : candidate_json.items()) {
    RelationId relation = vocab.AddRelation(symbol);
    auto& out = candidates[relation];
    for (const auto& entity : list) {
      out.push_back(vocab.AddEntity(entity.get<std::string>()));
    }
  }

  if (vocab.num_entities() != entities || vocab.num_relations() != relations) {
    throw Error(ErrorClass::kConsistency,
                "dataset files use symbols missing from vocab.json");
  }
  return Assemble(std::move(vocab), std::move(tasks), background,
                  std::move(candidates));
}

KnowledgeStore KnowledgeStore::Assemble(
    Vocabulary vocab, std::array<std::vector<Task>, 3> tasks,
    const std::vector<HyperFact>& raw_background, CandidateMap candidates) {
  KnowledgeStore store;
  std::vector<HyperFact> augmented = AddInverseFacts(raw_background, vocab);
  store.background_ = BackgroundIndex::Build(std::move(augmented), vocab);
  for (const auto& split_tasks : tasks) {
    for (const Task& task : split_tasks) {
      if (!store.few_shot_relations_.insert(task.relation).second) {
        throw Error(ErrorClass::kConsistency,
                    "relation '" + vocab.RelationSymbol(task.relation) +
                        "' appears in more than one task");
      }
      for (const HyperFact& fact : task.facts) {
        auto& tails = store.known_tails_[TailQueryKey::Of(fact)];
        if (std::find(tails.begin(), tails.end(), fact.tail) == tails.end()) {
          tails.push_back(fact.tail);
        }
      }
    }
  }
  AssertNoLeakage(store.background_, store.few_shot_relations_, vocab);
  store.all_entities_.reserve(vocab.num_entities());
  for (std::size_t i = 0; i < vocab.num_entities(); ++i) {
    store.all_entities_.push_back(EntityId{static_cast<std::int32_t>(i)});
  }
  store.vocab_ = std::move(vocab);
  store.tasks_ = std::move(tasks);
  store.candidates_ = std::move(candidates);
  return store;
}

const Task* KnowledgeStore::FindTask(RelationId relation) const {
  for (const auto& split_tasks : tasks_) {
    for (const Task& task : split_tasks) {
      if (task.relation == relation) return &task;
    }
  }
  return nullptr;
}

std::span<const EntityId> KnowledgeStore::Candidates(
    RelationId relation) const {
  auto it = candidates_.find(relation);
  if (it == candidates_.end()) return all_entities_;
  return it->second;
}

std::span<const EntityId> KnowledgeStore::KnownTails(
    const HyperFact& fact) const {
  auto it = known_tails_.find(TailQueryKey::Of(fact));
  if (it == known_tails_.end()) return {};
  return it->second;
}

}  // namespace metarh
