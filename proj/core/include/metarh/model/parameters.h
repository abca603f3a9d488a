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

#ifndef METARH_MODEL_PARAMETERS_H_
#define METARH_MODEL_PARAMETERS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "metarh/autodiff/var.h"
#include "metarh/common/rng.h"
#include "metarh/hkg/fact.h"
#include "metarh/model/config.h"

namespace metarh::model {

// Embedding table stored as one leaf per row, so gradients stay sparse in
// the graph while the optimizer can still treat every row as a parameter.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t rows, int dim, Rng& rng);

  const ad::Var& row(std::size_t index) const { return rows_.at(index); }
  ad::Var& mutable_row(std::size_t index) { return rows_.at(index); }
  std::size_t size() const { return rows_.size(); }
  int dim() const { return dim_; }

  ad::Matrix ToMatrix() const;                // rows x dim
  void AssignFromMatrix(const ad::Matrix& m);  // keeps the leaf handles

  const std::vector<ad::Var>& rows() const { return rows_; }

 private:
  std::vector<ad::Var> rows_;  // dim x 1 each
  int dim_ = 0;
};

struct BackgroundEncoderParams {
  ad::Var w1;    // dim x 2dim
  ad::Var b1;    // dim x 1
  ad::Var w2;    // dim x dim, shared with the scorer by default
  ad::Var u1;    // dim x 1
  ad::Var u2;    // dim x 1
  ad::Var b_g;   // 1 x 1
};

struct GranBlockParams {
  ad::Var wq, wk, wv, wo;        // dim x dim; heads are column slices
  ad::Var key_bias, value_bias;  // labels x dim
  ad::Var ln1_gamma, ln1_beta;   // 1 x dim
  ad::Var ln2_gamma, ln2_beta;
  ad::Var ffn_w1, ffn_b1;        // dim x f*dim, 1 x f*dim
  ad::Var ffn_w2, ffn_b2;        // f*dim x dim, 1 x dim
};

struct GranParams {
  std::vector<GranBlockParams> blocks;
};

struct NamedTensor {
  std::string name;
  ad::Var var;
};

// Every learnable tensor of the model.
class Parameters {
 public:
  Parameters() = default;
  Parameters(const ModelConfig& config, std::size_t num_entities,
             std::size_t num_relations, std::uint64_t seed);

  EmbeddingTable entities;
  EmbeddingTable relations;
  ad::Var mask_token;  // dim x 1
  BackgroundEncoderParams background;
  ad::Var scorer_w2;   // aliases background.w2 when shared
  GranParams gran;

  const ad::Var& entity(EntityId id) const { return entities.row(Index(id)); }
  const ad::Var& relation(RelationId id) const { return relations.row(Index(id)); }

  // Dense tensors other than the embedding tables, in a fixed order.
  std::vector<NamedTensor> DenseTensors() const;

  // Every leaf (table rows included), each exactly once.
  std::vector<ad::Var> Leaves() const;

  // Deep copy of all values (used to keep the best checkpoint).
  std::vector<ad::Matrix> Snapshot() const;
  void Restore(const std::vector<ad::Matrix>& snapshot);
};

}  // namespace metarh::model

#endif  // METARH_MODEL_PARAMETERS_H_
