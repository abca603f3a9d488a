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

#include "metarh/dataset/builder.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "metarh/common/error.h"
#include "metarh/common/json_config.h"
#include "metarh/common/rng.h"
#include "metarh/hkg/background_index.h"
#include "metarh/hkg/fact_io.h"

namespace metarh::dataset {
namespace {

bool UsesRelation(const HyperFact& fact, const std::set<RelationId>& relations) {
  if (relations.contains(fact.relation)) return true;
  return std::any_of(fact.qualifiers.begin(), fact.qualifiers.end(),
                     [&](const Qualifier& q) {
                       return relations.contains(q.attribute);
                     });
}

template <typename Fn>
void ForEachEntity(const HyperFact& fact, Fn&& fn) {
  fn(fact.head);
  fn(fact.tail);
  for (const Qualifier& q : fact.qualifiers) fn(q.value);
}

double HyperRate(const std::vector<HyperFact>& facts) {
  if (facts.empty()) return 0.0;
  auto hyper = std::count_if(facts.begin(), facts.end(),
                             [](const HyperFact& f) { return f.arity() > 0; });
  return static_cast<double>(hyper) / static_cast<double>(facts.size());
}

}  // namespace

void BuildConfig::Validate() const {
  if (min_instances <= 0 || min_instances > max_instances) {
    throw Error(ErrorClass::kConfig,
                "instance bounds must satisfy 0 < min <= max");
  }
  double sum = 0.0;
  for (double f : split_fractions) {
    if (!(f > 0.0)) {
      throw Error(ErrorClass::kConfig, "split fractions must be positive");
    }
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorClass::kConfig, "split fractions must sum to 1");
  }
  if (max_candidates == 0) {
    throw Error(ErrorClass::kConfig, "max_candidates must be positive");
  }
}

nlohmann::ordered_json BuildConfig::ToJson() const {
  nlohmann::ordered_json json;
  json["min_instances"] = min_instances;
  json["max_instances"] = max_instances;
  json["split_fractions"] = split_fractions;
  json["rng_seed"] = rng_seed;
  json["max_candidates"] = max_candidates;
  return json;
}

BuildConfig BuildConfig::FromJson(const nlohmann::json& json) {
  BuildConfig config;
  RejectUnknownKeys(json, config.ToJson(), "build config");
  try {
    config.min_instances = json.value("min_instances", config.min_instances);
    config.max_instances = json.value("max_instances", config.max_instances);
    if (json.contains("split_fractions")) {
      config.split_fractions =
          json.at("split_fractions").get<std::array<double, 3>>();
    }
    config.rng_seed = json.value("rng_seed", config.rng_seed);
    config.max_candidates = json.value("max_candidates", config.max_candidates);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorClass::kConfig, std::string("build config: ") + e.what());
  }
  config.Validate();
  return config;
}

nlohmann::ordered_json DatasetStats::ToJson() const {
  nlohmann::ordered_json json;
  json["#E"] = num_entities;
  json["#R"] = num_relations;
  json["#E-q (few-shot)"] = num_qualifier_values_few_shot;
  json["#R-q (few-shot)"] = num_qualifier_attributes_few_shot;
  json["#E-q (few-shot+background)"] = num_qualifier_values_all;
  json["#R-q (few-shot+background)"] = num_qualifier_attributes_all;
  json["#B-facts"] = num_background_facts;
  json["B-N-rate"] = background_hyper_rate;
  json["#F-facts"] = num_few_shot_facts;
  json["F-N-rate"] = few_shot_hyper_rate;
  json["#Tasks"] = num_tasks;
  return json;
}

std::set<RelationId> SelectFewShotRelations(
    const std::vector<HyperFact>& corpus, const BuildConfig& config) {
  config.Validate();
  std::map<RelationId, long> counts;
  for (const HyperFact& fact : corpus) ++counts[fact.relation];
  std::set<RelationId> selected;
  for (const auto& [relation, count] : counts) {
    if (count >= config.min_instances && count <= config.max_instances) {
      selected.insert(relation);
    }
  }
  if (selected.empty()) {
    throw Error(ErrorClass::kBuild, "no few-shot relations under bounds");
  }
  return selected;
}

std::vector<HyperFact> ExtractFewShotData(
    const std::vector<HyperFact>& corpus,
    const std::set<RelationId>& few_shot_relations) {
  std::vector<HyperFact> out;
  for (const HyperFact& fact : corpus) {
    if (!few_shot_relations.contains(fact.relation)) continue;
    bool leaks = std::any_of(
        fact.qualifiers.begin(), fact.qualifiers.end(),
        [&](const Qualifier& q) { return few_shot_relations.contains(q.attribute); });
    if (!leaks) out.push_back(fact);
  }
  return out;
}

std::vector<HyperFact> ExtractBackgroundData(
    const std::vector<HyperFact>& corpus,
    const std::vector<HyperFact>& few_shot_data,
    const std::set<RelationId>& few_shot_relations) {
  std::unordered_set<EntityId> entities;
  for (const HyperFact& fact : few_shot_data) {
    ForEachEntity(fact, [&](EntityId e) { entities.insert(e); });
  }
  std::vector<HyperFact> out;
  for (const HyperFact& fact : corpus) {
    if (UsesRelation(fact, few_shot_relations)) continue;
    bool mentions = false;
    ForEachEntity(fact, [&](EntityId e) { mentions = mentions || entities.contains(e); });
    if (mentions) out.push_back(fact);
  }
  return out;
}

std::array<std::size_t, 3> SplitSizes(std::size_t n,
                                      const std::array<double, 3>& fractions) {
  auto sized = [n](double f) {
    return std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(f * static_cast<double>(n))));
  };
  const std::size_t valid = sized(fractions[1]);
  const std::size_t test = sized(fractions[2]);
  if (n < valid + test + 1) {
    throw Error(ErrorClass::kBuild,
                "too few few-shot relations (" + std::to_string(n) +
                    ") for non-empty train/valid/test splits");
  }
  return {n - valid - test, valid, test};
}

TaskSplit SplitTasks(const std::set<RelationId>& few_shot_relations,
                     const BuildConfig& config) {
  config.Validate();
  auto [n_train, n_valid, n_test] =
      SplitSizes(few_shot_relations.size(), config.split_fractions);
  std::vector<RelationId> order(few_shot_relations.begin(),
                                few_shot_relations.end());
  Rng rng(MixSeed(config.rng_seed, 0x5eed5911173ULL));
  rng.Shuffle(order);
  TaskSplit split;
  split.train.assign(order.begin(), order.begin() + n_train);
  split.valid.assign(order.begin() + n_train,
                     order.begin() + n_train + n_valid);
  split.test.assign(order.begin() + n_train + n_valid, order.end());
  (void)n_test;
  return split;
}

std::map<RelationId, std::vector<EntityId>> BuildCandidateSets(
    const std::vector<HyperFact>& few_shot_data,
    const std::vector<HyperFact>& background, std::size_t max_candidates) {
  // tails_of[r]: entities that are a primary tail of r. An entity's type
  // proxy is the set of relations whose tails_of contains it.
  std::map<RelationId, std::set<EntityId>> tails_of;
  std::unordered_map<EntityId, std::set<RelationId>> proxy;
  std::unordered_map<EntityId, std::size_t> degree;
  auto scan = [&](const std::vector<HyperFact>& facts) {
    for (const HyperFact& fact : facts) {
      tails_of[fact.relation].insert(fact.tail);
      proxy[fact.tail].insert(fact.relation);
      std::set<EntityId> seen;
      ForEachEntity(fact, [&](EntityId e) { seen.insert(e); });
      for (EntityId e : seen) ++degree[e];
    }
  };
  scan(few_shot_data);
  scan(background);

  std::map<RelationId, std::set<EntityId>> true_tails;
  for (const HyperFact& fact : few_shot_data) {
    true_tails[fact.relation].insert(fact.tail);
  }

  std::map<RelationId, std::vector<EntityId>> out;
  for (const auto& [relation, tails] : true_tails) {
    std::set<RelationId> types;
    for (EntityId t : tails) types.insert(proxy[t].begin(), proxy[t].end());
    std::set<EntityId> closure;
    for (RelationId type : types) {
      closure.insert(tails_of[type].begin(), tails_of[type].end());
    }
    std::vector<EntityId> ranked(closure.begin(), closure.end());
    if (ranked.size() > max_candidates) {
      std::stable_sort(ranked.begin(), ranked.end(),
                       [&](EntityId a, EntityId b) {
                         return degree[a] > degree[b];
                       });
      ranked.resize(max_candidates);
    }
    std::set<EntityId> final_set(ranked.begin(), ranked.end());
    final_set.insert(tails.begin(), tails.end());
    out[relation] = std::vector<EntityId>(final_set.begin(), final_set.end());
  }
  return out;
}

DatasetStats ComputeStats(const std::vector<HyperFact>& few_shot_data,
                          const std::vector<HyperFact>& background,
                          std::size_t num_tasks) {
  DatasetStats stats;
  std::set<EntityId> entities, values_few, values_all;
  std::set<RelationId> relations, attributes_few, attributes_all;
  auto scan = [&](const std::vector<HyperFact>& facts, bool few_shot) {
    for (const HyperFact& fact : facts) {
      ForEachEntity(fact, [&](EntityId e) { entities.insert(e); });
      relations.insert(fact.relation);
      for (const Qualifier& q : fact.qualifiers) {
        relations.insert(q.attribute);
        values_all.insert(q.value);
        attributes_all.insert(q.attribute);
        if (few_shot) {
          values_few.insert(q.value);
          attributes_few.insert(q.attribute);
        }
      }
    }
  };
  scan(few_shot_data, true);
  scan(background, false);
  stats.num_entities = entities.size();
  stats.num_relations = relations.size();
  stats.num_qualifier_values_few_shot = values_few.size();
  stats.num_qualifier_attributes_few_shot = attributes_few.size();
  stats.num_qualifier_values_all = values_all.size();
  stats.num_qualifier_attributes_all = attributes_all.size();
  stats.num_background_facts = background.size();
  stats.background_hyper_rate = HyperRate(background);
  stats.num_few_shot_facts = few_shot_data.size();
  stats.few_shot_hyper_rate = HyperRate(few_shot_data);
  stats.num_tasks = num_tasks;
  return stats;
}

BuiltDataset BuildDataset(const std::vector<HyperFact>& corpus,
                          const Vocabulary& corpus_vocab,
                          const BuildConfig& config) {
  config.Validate();
  for (const HyperFact& fact : corpus) {
    if (corpus_vocab.IsInverse(fact.relation)) {
      throw Error(ErrorClass::kBuild,
                  "corpus contains inverse relation '" +
                      corpus_vocab.RelationSymbol(fact.relation) + "'");
    }
  }
  const std::set<RelationId> few_shot = SelectFewShotRelations(corpus, config);
  const std::vector<HyperFact> few_shot_data = ExtractFewShotData(corpus, few_shot);
  const std::vector<HyperFact> background =
      ExtractBackgroundData(corpus, few_shot_data, few_shot);

  // Relations whose every instance was dropped for qualifier leakage have no
  // task; the split only covers relations that still have facts.
  std::set<RelationId> task_relations;
  for (const HyperFact& fact : few_shot_data) task_relations.insert(fact.relation);
  const TaskSplit split = SplitTasks(task_relations, config);
  const auto candidates =
      BuildCandidateSets(few_shot_data, background, config.max_candidates);

  BuiltDataset built;
  built.stats = ComputeStats(few_shot_data, background, task_relations.size());

  // Re-key onto a compact vocabulary: few-shot symbols first, then background.
  Vocabulary& vocab = built.vocab;
  auto remap = [&](const HyperFact& fact) {
    HyperFact out;
    out.head = vocab.AddEntity(corpus_vocab.EntitySymbol(fact.head));
    out.relation = vocab.AddRelation(corpus_vocab.RelationSymbol(fact.relation));
    out.tail = vocab.AddEntity(corpus_vocab.EntitySymbol(fact.tail));
    for (const Qualifier& q : fact.qualifiers) {
      out.qualifiers.push_back(
          Qualifier{vocab.AddRelation(corpus_vocab.RelationSymbol(q.attribute)),
                    vocab.AddEntity(corpus_vocab.EntitySymbol(q.value))});
    }
    return out;
  };
  std::map<RelationId, std::vector<HyperFact>> by_relation;
  for (const HyperFact& fact : few_shot_data) {
    by_relation[fact.relation].push_back(remap(fact));
  }
  for (const HyperFact& fact : background) built.background.push_back(remap(fact));

  const std::array<const std::vector<RelationId>*, 3> parts{
      &split.train, &split.valid, &split.test};
  for (int s = 0; s < 3; ++s) {
    for (RelationId relation : *parts[s]) {
      Task task;
      task.relation = *vocab.FindRelation(corpus_vocab.RelationSymbol(relation));
      task.facts = std::move(by_relation[relation]);
      built.tasks[s].push_back(std::move(task));
    }
  }
  for (const auto& [relation, list] : candidates) {
    auto& out = built.candidates[*vocab.FindRelation(
        corpus_vocab.RelationSymbol(relation))];
    for (EntityId e : list) out.push_back(vocab.AddEntity(corpus_vocab.EntitySymbol(e)));
    std::sort(out.begin(), out.end());
  }

  // Registers inverse partners and checks leakage on the augmented data.
  std::set<RelationId> compact_few_shot;
  for (const auto& split_tasks : built.tasks) {
    for (const Task& task : split_tasks) compact_few_shot.insert(task.relation);
  }
  BackgroundIndex index = BackgroundIndex::Build(
      AddInverseFacts(built.background, vocab), vocab);
  AssertNoLeakage(index, compact_few_shot, vocab);
  return built;
}

void WriteDataset(const BuiltDataset& built, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "tasks");
  const Vocabulary& vocab = built.vocab;
  WriteFactsFile(dir / "background.jsonl", built.background, vocab);
  for (Split split : {Split::kTrain, Split::kValid, Split::kTest}) {
    nlohmann::ordered_json json = nlohmann::ordered_json::object();
    for (const Task& task : built.tasks[static_cast<int>(split)]) {
      nlohmann::ordered_json records = nlohmann::ordered_json::array();
      for (const HyperFact& fact : task.facts) records.push_back(FactToJson(fact, vocab));
      json[vocab.RelationSymbol(task.relation)] = std::move(records);
    }
    WriteJsonFile(dir / "tasks" / (std::string(SplitName(split)) + ".json"), json);
  }
  nlohmann::ordered_json candidates = nlohmann::ordered_json::object();
  for (const auto& [relation, list] : built.candidates) {
    nlohmann::ordered_json symbols = nlohmann::ordered_json::array();
    for (EntityId e : list) symbols.push_back(vocab.EntitySymbol(e));
    candidates[vocab.RelationSymbol(relation)] = std::move(symbols);
  }
  WriteJsonFile(dir / "candidates.json", candidates);
  WriteJsonFile(dir / "stats.json", built.stats.ToJson());
  WriteJsonFile(dir / "vocab.json", vocab.ToJson());
}

}  // namespace metarh::dataset
