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

#include "metarh/hkg/vocabulary.h"

#include "metarh/common/error.h"
#include "metarh/common/hashing.h"

namespace metarh {

EntityId Vocabulary::AddEntity(std::string_view symbol) {
  auto it = entity_ids_.find(std::string(symbol));
  if (it != entity_ids_.end()) return it->second;
  EntityId id{static_cast<std::int32_t>(entities_.size())};
  entities_.emplace_back(symbol);
  entity_ids_.emplace(entities_.back(), id);
  return id;
}

RelationId Vocabulary::AddRelation(std::string_view symbol) {
  auto it = relation_ids_.find(std::string(symbol));
  if (it != relation_ids_.end()) return it->second;
  RelationId id{static_cast<std::int32_t>(relations_.size())};
  relations_.emplace_back(symbol);
  relation_ids_.emplace(relations_.back(), id);
  is_inverse_.push_back(false);
  partner_.push_back(-1);
  return id;
}

std::optional<EntityId> Vocabulary::FindEntity(std::string_view symbol) const {
  auto it = entity_ids_.find(std::string(symbol));
  if (it == entity_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<RelationId> Vocabulary::FindRelation(
    std::string_view symbol) const {
  auto it = relation_ids_.find(std::string(symbol));
  if (it == relation_ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::EntitySymbol(EntityId id) const {
  if (!Contains(id)) {
    throw Error(ErrorClass::kConsistency,
                "entity id " + std::to_string(Index(id)) + " out of range");
  }
  return entities_[Index(id)];
}

const std::string& Vocabulary::RelationSymbol(RelationId id) const {
  if (!Contains(id)) {
    throw Error(ErrorClass::kConsistency,
                "relation id " + std::to_string(Index(id)) + " out of range");
  }
  return relations_[Index(id)];
}

bool Vocabulary::Contains(EntityId id) const {
  return static_cast<std::int32_t>(id) >= 0 && Index(id) < entities_.size();
}

bool Vocabulary::Contains(RelationId id) const {
  return static_cast<std::int32_t>(id) >= 0 && Index(id) < relations_.size();
}

std::optional<RelationId> Vocabulary::InverseOf(RelationId id) const {
  std::int32_t partner = partner_.at(Index(id));
  if (partner < 0) return std::nullopt;
  return RelationId{partner};
}

RelationId Vocabulary::EnsureInverse(RelationId id) {
  if (IsInverse(id)) {
    throw Error(ErrorClass::kConsistency,
                "relation '" + RelationSymbol(id) +
                    "' is already an inverse; inverse of an inverse refused");
  }
  if (auto existing = InverseOf(id)) return *existing;
  const std::string symbol = relations_[Index(id)] + std::string(kInverseSuffix);
  if (relation_ids_.contains(symbol)) {
    throw Error(ErrorClass::kConsistency,
                "relation symbol '" + symbol + "' already used");
  }
  RelationId inverse = AddRelation(symbol);
  is_inverse_[Index(inverse)] = true;
  partner_[Index(inverse)] = static_cast<std::int32_t>(id);
  partner_[Index(id)] = static_cast<std::int32_t>(inverse);
  return inverse;
}

RelationId Vocabulary::BaseRelation(RelationId id) const {
  if (IsInverse(id)) return *InverseOf(id);
  return id;
}

nlohmann::ordered_json Vocabulary::ToJson() const {
  nlohmann::ordered_json json;
  json["entities"] = entities_;
  json["relations"] = relations_;
  nlohmann::ordered_json inverse_of = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    if (!is_inverse_[i] && partner_[i] >= 0) {
      inverse_of[relations_[i]] = relations_[partner_[i]];
    }
  }
  json["inverse_of"] = std::move(inverse_of);
  return json;
}

Vocabulary Vocabulary::FromJson(const nlohmann::json& json) {
  Vocabulary vocab;
  try {
    for (const auto& symbol : json.at("entities")) {
      vocab.AddEntity(symbol.get<std::string>());
    }
    for (const auto& symbol : json.at("relations")) {
      vocab.AddRelation(symbol.get<std::string>());
    }
    if (vocab.num_entities() != json.at("entities").size() ||
        vocab.num_relations() != json.at("relations").size()) {
      throw Error(ErrorClass::kSchema, "vocabulary contains duplicate symbols");
    }
    if (json.contains("inverse_of")) {
      for (const auto& [base, inverse] : json.at("inverse_of").items()) {
        auto base_id = vocab.FindRelation(base);
        auto inverse_id = vocab.FindRelation(inverse.get<std::string>());
        if (!base_id || !inverse_id) {
          throw Error(ErrorClass::kSchema,
                      "inverse_of names unknown relation '" + base + "'");
        }
        vocab.is_inverse_[Index(*inverse_id)] = true;
        vocab.partner_[Index(*inverse_id)] =
            static_cast<std::int32_t>(*base_id);
        vocab.partner_[Index(*base_id)] =
            static_cast<std::int32_t>(*inverse_id);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorClass::kSchema, std::string("vocabulary: ") + e.what());
  }
  return vocab;
}

std::uint64_t Vocabulary::Fingerprint() const {
  return Sha1Prefix64(ToJson().dump());
}

}  // namespace metarh
