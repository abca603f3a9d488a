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

#include "metarh/dataset/synthetic.h"

#include <string>
#include <utility>

#include "metarh/common/error.h"
#include "metarh/common/rng.h"

namespace metarh::dataset {
namespace {

struct Placement {
  int x, y, value;
};

}  // namespace

SyntheticCorpus GenerateSyntheticCorpus(const SyntheticConfig& config) {
  if (config.width < 2 || config.height < 2 || config.num_values < 1 ||
      config.max_offset < 1 || config.adjacency_block < 1) {
    throw Error(ErrorClass::kConfig, "synthetic lattice is too small");
  }
  std::vector<std::pair<int, int>> offsets;
  for (int dx = 0; dx <= config.max_offset; ++dx) {
    for (int dy = 0; dy <= config.max_offset; ++dy) {
      if (dx != 0 || dy != 0) offsets.emplace_back(dx, dy);
    }
  }
  if (static_cast<int>(offsets.size()) < config.num_relations) {
    throw Error(ErrorClass::kConfig,
                "synthetic config has fewer offsets than relations");
  }

  SyntheticCorpus corpus;
  Vocabulary& vocab = corpus.vocab;
  std::vector<EntityId> entities;
  for (int i = 0; i < config.num_entities(); ++i) {
    entities.push_back(vocab.AddEntity("e" + std::to_string(i)));
  }
  auto cell = [&](int x, int y) { return entities[x * config.height + y]; };
  const int value_base = config.width * config.height;
  const RelationId mod = vocab.AddRelation("mod");
  Rng rng(config.seed);
  rng.Shuffle(offsets);

  for (int j = 0; j < config.num_relations; ++j) {
    const RelationId relation = vocab.AddRelation("rel_" + std::to_string(j));
    const auto [dx, dy] = offsets[j];
    std::vector<Placement> valid;
    for (int x = 0; x + dx < config.width; ++x) {
      for (int y = 0; y < config.height; ++y) {
        for (int v = 0; v < config.num_values && y + dy + v < config.height; ++v) {
          valid.push_back({x, y, v});
        }
      }
    }
    if (static_cast<int>(valid.size()) < config.facts_per_relation) {
      throw Error(ErrorClass::kConfig,
                  "offset leaves fewer placements than facts_per_relation");
    }
    for (std::size_t pick :
         rng.SampleWithoutReplacement(valid.size(), config.facts_per_relation)) {
      const Placement& p = valid[pick];
      HyperFact fact;
      fact.head = cell(p.x, p.y);
      fact.relation = relation;
      fact.tail = cell(p.x + dx, p.y + dy + p.value);
      fact.qualifiers.push_back(Qualifier{mod, entities[value_base + p.value]});
      corpus.facts.push_back(std::move(fact));
    }
  }

  int emitted = 0;
  auto adjacency = [&](const char* name, EntityId from, EntityId to) {
    const RelationId r = vocab.AddRelation(
        std::string(name) + "_" + std::to_string(emitted / config.adjacency_block));
    corpus.facts.push_back(HyperFact{from, r, to, {}});
    ++emitted;
  };
  for (int x = 0; x + 1 < config.width; ++x) {
    for (int y = 0; y < config.height; ++y) adjacency("east", cell(x, y), cell(x + 1, y));
  }
  emitted = 0;
  for (int x = 0; x < config.width; ++x) {
    for (int y = 0; y + 1 < config.height; ++y) adjacency("north", cell(x, y), cell(x, y + 1));
  }
  return corpus;
}

LatticeCell SyntheticCell(const SyntheticConfig& config, const Vocabulary& vocab,
                          EntityId entity) {
  const int id = std::stoi(vocab.EntitySymbol(entity).substr(1));
  if (id < 0 || id >= config.width * config.height) {
    throw Error(ErrorClass::kInput, "entity is not a lattice cell");
  }
  return {id / config.height, id % config.height};
}

}  // namespace metarh::dataset
