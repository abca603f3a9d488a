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

#ifndef METARH_HKG_FACT_IO_H_
#define METARH_HKG_FACT_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "metarh/hkg/fact.h"
#include "metarh/hkg/vocabulary.h"

namespace metarh {

struct ParseOptions {
  // Accept `"t": null` (query files); the tail becomes kMissingEntity.
  bool allow_missing_tail = false;
};

// Reads JSON-lines facts {"h","r","t","q":[[a,v],...]} in file order, adding
// unseen symbols to `vocab`. Blank lines are skipped.
std::vector<HyperFact> ParseFacts(std::istream& in, Vocabulary& vocab,
                                  const ParseOptions& options = {});
std::vector<HyperFact> ReadFactsFile(const std::filesystem::path& path,
                                     Vocabulary& vocab,
                                     const ParseOptions& options = {});

HyperFact FactFromJson(const nlohmann::json& json, Vocabulary& vocab,
                       const ParseOptions& options = {});
nlohmann::ordered_json FactToJson(const HyperFact& fact,
                                  const Vocabulary& vocab);

// Keys in h, r, t, q order; qualifiers in stored order; no whitespace.
std::string SerializeFact(const HyperFact& fact, const Vocabulary& vocab);

void WriteFacts(std::ostream& out, const std::vector<HyperFact>& facts,
                const Vocabulary& vocab);
void WriteFactsFile(const std::filesystem::path& path,
                    const std::vector<HyperFact>& facts,
                    const Vocabulary& vocab);

nlohmann::json ReadJsonFile(const std::filesystem::path& path);
void WriteJsonFile(const std::filesystem::path& path,
                   const nlohmann::ordered_json& json);

}  // namespace metarh

#endif  // METARH_HKG_FACT_IO_H_
