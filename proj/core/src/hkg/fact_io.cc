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

#include "metarh/hkg/fact_io.h"

#include <fstream>
#include <istream>
#include <ostream>

#include "metarh/common/error.h"

namespace metarh {
namespace {

std::string RequireString(const nlohmann::json& json, const char* key) {
  if (!json.contains(key)) {
    throw Error(ErrorClass::kSchema, std::string("missing key \"") + key + "\"");
  }
  const auto& value = json.at(key);
  if (!value.is_string()) {
    throw Error(ErrorClass::kSchema,
                std::string("key \"") + key + "\" must be a string");
  }
  return value.get<std::string>();
}

}  // namespace

HyperFact FactFromJson(const nlohmann::json& json, Vocabulary& vocab,
                       const ParseOptions& options) {
  if (!json.is_object()) {
    throw Error(ErrorClass::kSchema, "fact record must be a JSON object");
  }
  HyperFact fact;
  fact.head = vocab.AddEntity(RequireString(json, "h"));
  fact.relation = vocab.AddRelation(RequireString(json, "r"));
  if (options.allow_missing_tail && json.contains("t") && json.at("t").is_null()) {
    fact.tail = kMissingEntity;
  } else {
    fact.tail = vocab.AddEntity(RequireString(json, "t"));
  }
  if (json.contains("q")) {
    const auto& pairs = json.at("q");
    if (!pairs.is_array()) {
      throw Error(ErrorClass::kSchema, "key \"q\" must be an array");
    }
    for (const auto& pair : pairs) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
          !pair[1].is_string()) {
        throw Error(ErrorClass::kSchema,
                    "qualifier must be a [attribute, value] string pair");
      }
      fact.qualifiers.push_back(
          Qualifier{vocab.AddRelation(pair[0].get<std::string>()),
                    vocab.AddEntity(pair[1].get<std::string>())});
    }
  }
  return fact;
}

std::vector<HyperFact> ParseFacts(std::istream& in, Vocabulary& vocab,
                                  const ParseOptions& options) {
  std::vector<HyperFact> facts;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json json;
    try {
      json = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(ErrorClass::kParse, line_number, e.what());
    }
    try {
      facts.push_back(FactFromJson(json, vocab, options));
    } catch (const Error& e) {
      throw ParseError(e.error_class(), line_number, e.what());
    }
  }
  return facts;
}

std::vector<HyperFact> ReadFactsFile(const std::filesystem::path& path,
                                     Vocabulary& vocab,
                                     const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorClass::kIo, "cannot open " + path.string());
  try {
    return ParseFacts(in, vocab, options);
  } catch (const ParseError& e) {
    throw ParseError(e.error_class(), e.line(),
                     path.string() + ": " + e.what());
  }
}

nlohmann::ordered_json FactToJson(const HyperFact& fact,
                                  const Vocabulary& vocab) {
  nlohmann::ordered_json json;
  json["h"] = vocab.EntitySymbol(fact.head);
  json["r"] = vocab.RelationSymbol(fact.relation);
  if (fact.tail == kMissingEntity) {
    json["t"] = nullptr;
  } else {
    json["t"] = vocab.EntitySymbol(fact.tail);
  }
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const Qualifier& q : fact.qualifiers) {
    pairs.push_back({vocab.RelationSymbol(q.attribute),
                     vocab.EntitySymbol(q.value)});
  }
  json["q"] = std::move(pairs);
  return json;
}

std::string SerializeFact(const HyperFact& fact, const Vocabulary& vocab) {
  return FactToJson(fact, vocab).dump();
}

void WriteFacts(std::ostream& out, const std::vector<HyperFact>& facts,
                const Vocabulary& vocab) {
  for (const HyperFact& fact : facts) out << SerializeFact(fact, vocab) << '\n';
}

void WriteFactsFile(const std::filesystem::path& path,
                    const std::vector<HyperFact>& facts,
                    const Vocabulary& vocab) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorClass::kIo, "cannot write " + path.string());
  WriteFacts(out, facts, vocab);
}

nlohmann::json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorClass::kIo, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorClass::kParse, path.string() + ": " + e.what());
  }
}

void WriteJsonFile(const std::filesystem::path& path,
                   const nlohmann::ordered_json& json) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorClass::kIo, "cannot write " + path.string());
  out << json.dump(1) << '\n';
}

}  // namespace metarh
