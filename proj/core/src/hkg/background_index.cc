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

#include "metarh/hkg/background_index.h"

#include "metarh/common/error.h"
#include "metarh/hkg/fact_io.h"

namespace metarh {

std::vector<HyperFact> AddInverseFacts(const std::vector<HyperFact>& facts,
                                       Vocabulary& vocab) {
  std::vector<HyperFact> out;
  out.reserve(facts.size() * 2);
  for (const HyperFact& fact : facts) {
    if (vocab.IsInverse(fact.relation)) {
      throw Error(ErrorClass::kConsistency,
                  "fact already uses inverse relation '" +
                      vocab.RelationSymbol(fact.relation) + "'");
    }
    out.push_back(fact);
  }
  for (const HyperFact& fact : facts) {
    HyperFact inverse = fact;
    inverse.head = fact.tail;
    inverse.tail = fact.head;
    inverse.relation = vocab.EnsureInverse(fact.relation);
    out.push_back(std::move(inverse));
  }
  return out;
}

BackgroundIndex BackgroundIndex::Build(std::vector<HyperFact> facts,
                                       const Vocabulary& vocab) {
  BackgroundIndex index;
  index.buckets_.resize(vocab.num_entities());
  for (std::size_t i = 0; i < facts.size(); ++i) {
    const HyperFact& fact = facts[i];
    bool ok = vocab.Contains(fact.head) && vocab.Contains(fact.tail) &&
              vocab.Contains(fact.relation);
    for (const Qualifier& q : fact.qualifiers) {
      ok = ok && vocab.Contains(q.attribute) && vocab.Contains(q.value);
    }
    if (!ok) {
      throw Error(ErrorClass::kConsistency,
                  "background fact #" + std::to_string(i) +
                      " references a symbol outside the vocabulary");
    }
    index.buckets_[Index(fact.head)].push_back(static_cast<FactIndex>(i));
  }
  index.facts_ = std::move(facts);
  return index;
}

std::span<const FactIndex> BackgroundIndex::FactsOf(EntityId entity) const {
  if (static_cast<std::int32_t>(entity) < 0 || Index(entity) >= buckets_.size()) {
    return {};
  }
  return buckets_[Index(entity)];
}

void AssertNoLeakage(const BackgroundIndex& background,
                     const std::set<RelationId>& few_shot_relations,
                     const Vocabulary& vocab) {
  auto leaks = [&](RelationId r) {
    return few_shot_relations.contains(vocab.BaseRelation(r)) ||
           few_shot_relations.contains(r);
  };
  for (const HyperFact& fact : background.facts()) {
    RelationId offending{-1};
    if (leaks(fact.relation)) {
      offending = fact.relation;
    } else {
      for (const Qualifier& q : fact.qualifiers) {
        if (leaks(q.attribute)) {
          offending = q.attribute;
          break;
        }
      }
    }
    if (static_cast<std::int32_t>(offending) >= 0) {
      throw Error(ErrorClass::kLeakage,
                  "background fact " + SerializeFact(fact, vocab) +
                      " uses few-shot relation '" +
                      vocab.RelationSymbol(offending) + "'");
    }
  }
}

}  // namespace metarh
