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

#ifndef METARH_TRAIN_CHECKPOINT_H_
#define METARH_TRAIN_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "metarh/autodiff/var.h"
#include "metarh/model/metarh_model.h"
#include "metarh/train/train_config.h"

namespace metarh::train {

// Little-endian layout:
//   "MRH1" u32 dim, u64 |E|, u64 |R|, u32 D, u32 heads, u64 vocab hash,
//   i64 step, u32 n + n bytes of config JSON,
//   u32 blocks, each: u32 n + name, u32 rows, u32 cols, rows*cols f64 (col-major),
//   u32 CRC-32 of every preceding byte.
struct CheckpointHeader {
  std::uint32_t dim = 0;
  std::uint64_t num_entities = 0;
  std::uint64_t num_relations = 0;
  std::uint32_t gran_layers = 0;
  std::uint32_t gran_heads = 0;
  std::uint64_t vocab_hash = 0;
};

struct NamedMatrix {
  std::string name;
  ad::Matrix value;
};

struct CheckpointContents {
  CheckpointHeader header;
  std::int64_t step = 0;
  TrainConfig config;
  std::vector<NamedMatrix> tensors;
};

void SaveCheckpoint(const std::filesystem::path& path,
                    const model::MetaRHModel& model, const TrainConfig& config,
                    std::uint64_t vocab_hash, std::int64_t step);

// Parses and verifies the trailer; raises a checksum error on mismatch and a
// load error on anything malformed.
CheckpointContents ReadCheckpoint(const std::filesystem::path& path);

struct LoadedModel {
  TrainConfig config;
  std::int64_t step = 0;
  std::unique_ptr<model::MetaRHModel> model;
};

// Rebuilds the model. A vocabulary hash other than `expected_vocab_hash`
// raises a load error.
LoadedModel LoadCheckpoint(const std::filesystem::path& path,
                           std::uint64_t expected_vocab_hash);

}  // namespace metarh::train

#endif  // METARH_TRAIN_CHECKPOINT_H_
