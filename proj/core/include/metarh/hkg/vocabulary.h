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

#ifndef METARH_HKG_VOCABULARY_H_
#define METARH_HKG_VOCABULARY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "metarh/hkg/fact.h"

namespace metarh {

// Suffix that names the inverse partner of a relation.
inline constexpr std::string_view kInverseSuffix = "__inv";

// Symbol <-> dense id bijections for entities and relations. Ids are assigned
// contiguously from 0 in insertion order.
class Vocabulary {
 public:
  EntityId AddEntity(std::string_view symbol);
  RelationId AddRelation(std::string_view symbol);

  std::optional<EntityId> FindEntity(std::string_view symbol) const;
  std::optional<RelationId> FindRelation(std::string_view symbol) const;

  const std::string& EntitySymbol(EntityId id) const;
  const std::string& RelationSymbol(RelationId id) const;

  std::size_t num_entities() const { return entities_.size(); }
  std::size_t num_relations() const { return relations_.size(); }

  bool Contains(EntityId id) const;
  bool Contains(RelationId id) const;

  bool IsInverse(RelationId id) const { return is_inverse_.at(Index(id)); }

  // Partner registered for `id`, if any (works in both directions).
  std::optional<RelationId> InverseOf(RelationId id) const;

  // Returns the inverse partner of a non-inverse relation, registering
  // "<symbol>__inv" on first use. Asking for the inverse of an inverse is a
  // consistency error.
  RelationId EnsureInverse(RelationId id);

  // The non-inverse relation underlying `id`.
  RelationId BaseRelation(RelationId id) const;

  nlohmann::ordered_json ToJson() const;
  static Vocabulary FromJson(const nlohmann::json& json);

  // Stable 64-bit digest of the serialized vocabulary.
  std::uint64_t Fingerprint() const;

 private:
  std::vector<std::string> entities_;
  std::unordered_map<std::string, EntityId> entity_ids_;
  std::vector<std::string> relations_;
  std::unordered_map<std::string, RelationId> relation_ids_;
  std::vector<bool> is_inverse_;
  std::vector<std::int32_t> partner_;  // -1 when unpaired
};

}  // namespace metarh

#endif  // METARH_HKG_VOCABULARY_H_
