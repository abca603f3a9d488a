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

#include "metarh/train/pretrained.h"

#include <spdlog/spdlog.h>

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "metarh/common/error.h"

namespace metarh::train {

double PretrainedCoverage::fraction() const {
  const std::size_t total = total_entities + total_relations;
  if (total == 0) return 0.0;
  return static_cast<double>(matched_entities + matched_relations) / total;
}

PretrainedCoverage LoadPretrainedEmbeddings(const std::filesystem::path& path,
                                            const Vocabulary& vocab,
                                            model::Parameters& params) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorClass::kIo, "cannot open " + path.string());
  const int dim = params.entities.dim();
  PretrainedCoverage coverage;
  coverage.total_entities = params.entities.size();
  coverage.total_relations = params.relations.size();

  std::vector<bool> entity_seen(coverage.total_entities, false);
  std::vector<bool> relation_seen(coverage.total_relations, false);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string symbol;
    std::vector<double> vec;
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      symbol = j.at("symbol").get<std::string>();
      vec = j.at("vec").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(ErrorClass::kParse, line_no, e.what());
    }
    if (static_cast<int>(vec.size()) != dim) {
      throw Error(ErrorClass::kConfig,
                  "pretrained vector for '" + symbol + "' has " +
                      std::to_string(vec.size()) + " entries, model dim is " +
                      std::to_string(dim));
    }
    const Eigen::Map<const Eigen::VectorXd> value(vec.data(), dim);
    if (auto e = vocab.FindEntity(symbol);
        e && static_cast<std::size_t>(Index(*e)) < params.entities.size()) {
      params.entities.mutable_row(Index(*e)).mutable_leaf_value() = value;
      if (!entity_seen[Index(*e)]) ++coverage.matched_entities;
      entity_seen[Index(*e)] = true;
    }
    if (auto r = vocab.FindRelation(symbol);
        r && static_cast<std::size_t>(Index(*r)) < params.relations.size()) {
      params.relations.mutable_row(Index(*r)).mutable_leaf_value() = value;
      if (!relation_seen[Index(*r)]) ++coverage.matched_relations;
      relation_seen[Index(*r)] = true;
    }
  }
  spdlog::info("pretrained embeddings: {}/{} entities, {}/{} relations ({:.3f})",
               coverage.matched_entities, coverage.total_entities,
               coverage.matched_relations, coverage.total_relations,
               coverage.fraction());
  return coverage;
}

}  // namespace metarh::train
