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

#include "metarh/hkg/fact.h"

#include <algorithm>

namespace metarh {
namespace {

void HashCombine(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

std::size_t HashCore(EntityId head, RelationId relation,
                     const std::vector<Qualifier>& sorted) {
  std::size_t seed = 0;
  HashCombine(seed, Index(head));
  HashCombine(seed, Index(relation));
  for (const Qualifier& q : sorted) {
    HashCombine(seed, Index(q.attribute));
    HashCombine(seed, Index(q.value));
  }
  return seed;
}

}  // namespace

std::vector<Qualifier> HyperFact::SortedQualifiers() const {
  std::vector<Qualifier> sorted = qualifiers;
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

bool operator==(const HyperFact& a, const HyperFact& b) {
  if (a.head != b.head || a.relation != b.relation || a.tail != b.tail ||
      a.qualifiers.size() != b.qualifiers.size()) {
    return false;
  }
  return a.SortedQualifiers() == b.SortedQualifiers();
}

std::size_t HashFact(const HyperFact& fact) {
  std::size_t seed = HashCore(fact.head, fact.relation, fact.SortedQualifiers());
  HashCombine(seed, Index(fact.tail));
  return seed;
}

TailQueryKey TailQueryKey::Of(const HyperFact& fact) {
  return TailQueryKey{fact.head, fact.relation, fact.SortedQualifiers()};
}

std::size_t TailQueryKeyHash::operator()(const TailQueryKey& key) const {
  return HashCore(key.head, key.relation, key.sorted_qualifiers);
}

}  // namespace metarh
