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

#ifndef METARH_TOOLS_CLI_APP_H_
#define METARH_TOOLS_CLI_APP_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "metarh/common/error.h"
#include "metarh/hkg/fact.h"
#include "metarh/hkg/knowledge_store.h"
#include "metarh/model/metarh_model.h"

namespace metarh::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

int ExitCodeFor(ErrorClass error_class);

struct Prediction {
  HyperFact query;
  std::vector<std::pair<EntityId, double>> ranking;  // ascending score
};

// Adapts the support relation and ranks every candidate for each query. All
// support facts and queries must share one relation; supports must be
// non-empty.
std::vector<Prediction> Predict(const model::MetaRHModel& model,
                                const KnowledgeStore& store,
                                const std::vector<HyperFact>& support,
                                const std::vector<HyperFact>& queries,
                                int max_background, int num_negatives,
                                std::uint64_t seed, std::size_t top_n);

// Entry point of the `metarh` binary.
int Run(int argc, char** argv);

}  // namespace metarh::cli

#endif  // METARH_TOOLS_CLI_APP_H_
