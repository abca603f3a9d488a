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

#ifndef METARH_TRAIN_PRETRAINED_H_
#define METARH_TRAIN_PRETRAINED_H_

#include <filesystem>

#include "metarh/hkg/vocabulary.h"
#include "metarh/model/parameters.h"

namespace metarh::train {

struct PretrainedCoverage {
  std::size_t matched_entities = 0;
  std::size_t matched_relations = 0;
  std::size_t total_entities = 0;
  std::size_t total_relations = 0;

  // Matched rows over all embedding rows.
  double fraction() const;
};

// Overwrites entity and relation rows whose symbol appears in the JSON-lines
// file ({"symbol": str, "vec": [...]}); other rows keep their random init.
// A vector of the wrong length raises a config error.
PretrainedCoverage LoadPretrainedEmbeddings(const std::filesystem::path& path,
                                            const Vocabulary& vocab,
                                            model::Parameters& params);

}  // namespace metarh::train

#endif  // METARH_TRAIN_PRETRAINED_H_
