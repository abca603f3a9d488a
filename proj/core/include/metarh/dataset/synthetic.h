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

#ifndef METARH_DATASET_SYNTHETIC_H_
#define METARH_DATASET_SYNTHETIC_H_

#include <cstdint>
#include <vector>

#include "metarh/hkg/fact.h"
#include "metarh/hkg/vocabulary.h"

namespace metarh::dataset {

// Corpus with a planted, learnable pattern. The first width*height entities
// sit on a lattice (entity x*height + y at cell (x, y)); the last num_values
// entities are qualifier values. Few-shot relation rel_j moves its head by a
// relation-specific lattice offset (dx_j, dy_j) and the "mod" qualifier value
// v adds v to y, so the tail is a deterministic function of (head, value).
// Short east_b / north_b adjacency blocks (fewer instances than the builder's
// lower bound) become background data.
struct SyntheticConfig {
  int num_relations = 20;
  int width = 7;
  int height = 8;
  int num_values = 4;
  int max_offset = 4;         // dx, dy in [0, max_offset], not both zero
  int facts_per_relation = 30;
  int adjacency_block = 10;   // background facts per adjacency relation
  std::uint64_t seed = 7;

  int num_entities() const { return width * height + num_values; }
};

struct SyntheticCorpus {
  Vocabulary vocab;
  std::vector<HyperFact> facts;
};

SyntheticCorpus GenerateSyntheticCorpus(const SyntheticConfig& config);

struct LatticeCell {
  int x = 0;
  int y = 0;
};

// Lattice cell of a non-value entity symbol "e<i>".
LatticeCell SyntheticCell(const SyntheticConfig& config, const Vocabulary& vocab,
                          EntityId entity);

}  // namespace metarh::dataset

#endif  // METARH_DATASET_SYNTHETIC_H_
