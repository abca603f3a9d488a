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

#ifndef METARH_HKG_BACKGROUND_INDEX_H_
#define METARH_HKG_BACKGROUND_INDEX_H_

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "metarh/hkg/fact.h"
#include "metarh/hkg/vocabulary.h"

namespace metarh {

using FactIndex = std::uint32_t;

// Appends, after the input facts, one inverse per fact: head and tail swap,
// the relation becomes its "__inv" partner, qualifiers are kept. Input facts
// that already use an inverse relation are rejected.
std::vector<HyperFact> AddInverseFacts(const std::vector<HyperFact>& facts,
                                       Vocabulary& vocab);

// Inverse-augmented background facts bucketed by head entity.
class BackgroundIndex {
 public:
  BackgroundIndex() = default;

  // `facts` must already be inverse-augmented. Every symbol must be in
  // `vocab` (consistency error otherwise).
  static BackgroundIndex Build(std::vector<HyperFact> facts,
                               const Vocabulary& vocab);

  // Ids of facts whose head is `entity`; empty for unknown entities.
  std::span<const FactIndex> FactsOf(EntityId entity) const;

  const HyperFact& fact(FactIndex id) const { return facts_.at(id); }
  const std::vector<HyperFact>& facts() const { return facts_; }
  std::size_t num_facts() const { return facts_.size(); }

 private:
  std::vector<HyperFact> facts_;
  std::vector<std::vector<FactIndex>> buckets_;
};

// Throws a leakage error if any background fact uses a few-shot relation (or
// its inverse) as its relation or as a qualifier attribute.
void AssertNoLeakage(const BackgroundIndex& background,
                     const std::set<RelationId>& few_shot_relations,
                     const Vocabulary& vocab);

}  // namespace metarh

#endif  // METARH_HKG_BACKGROUND_INDEX_H_
