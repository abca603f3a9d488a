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

#ifndef METARH_HKG_FACT_H_
#define METARH_HKG_FACT_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace metarh {

// Dense ids into the entity (entities and qualifier values) and relation
// (relations and qualifier attributes) vocabularies.
enum class EntityId : std::int32_t {};
enum class RelationId : std::int32_t {};

inline constexpr EntityId kMissingEntity{-1};

constexpr std::size_t Index(EntityId id) {
  return static_cast<std::size_t>(static_cast<std::int32_t>(id));
}
constexpr std::size_t Index(RelationId id) {
  return static_cast<std::size_t>(static_cast<std::int32_t>(id));
}

struct Qualifier {
  RelationId attribute;
  EntityId value;

  friend bool operator==(const Qualifier&, const Qualifier&) = default;
  friend auto operator<=>(const Qualifier&, const Qualifier&) = default;
};

// A primary triple plus auxiliary attribute-value pairs. Qualifiers keep their
// stored order for serialization, but equality and hashing treat them as a
// multiset.
struct HyperFact {
  EntityId head{};
  RelationId relation{};
  EntityId tail{};
  std::vector<Qualifier> qualifiers;

  std::size_t arity() const { return qualifiers.size(); }

  // Qualifiers in canonical (sorted) order.
  std::vector<Qualifier> SortedQualifiers() const;

  friend bool operator==(const HyperFact& a, const HyperFact& b);
};

std::size_t HashFact(const HyperFact& fact);

// Identifies a fact up to its tail: (head, relation, qualifier multiset).
// Used to collect every known true tail of a query.
struct TailQueryKey {
  EntityId head{};
  RelationId relation{};
  std::vector<Qualifier> sorted_qualifiers;

  static TailQueryKey Of(const HyperFact& fact);
  friend bool operator==(const TailQueryKey&, const TailQueryKey&) = default;
};

struct TailQueryKeyHash {
  std::size_t operator()(const TailQueryKey& key) const;
};

struct HyperFactHash {
  std::size_t operator()(const HyperFact& fact) const { return HashFact(fact); }
};

}  // namespace metarh

#endif  // METARH_HKG_FACT_H_
