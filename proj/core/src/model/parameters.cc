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

#include "metarh/model/parameters.h"

#include <cmath>
#include <set>

#include "metarh/common/error.h"
#include "metarh/model/relation_encoder.h"

namespace metarh::model {
namespace {

// Residual branches of the relation encoder start near zero so the initial
// relation vector is on the scale of the entity embeddings.
constexpr double kResidualInitScale = 0.1;

ad::Matrix UniformMatrix(Eigen::Index rows, Eigen::Index cols, double bound,
                         Rng& rng) {
  ad::Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.Uniform(-bound, bound);
  }
  return m;
}

// Glorot/Xavier uniform for a fan_in x fan_out map.
ad::Var Xavier(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  return ad::Parameter(UniformMatrix(rows, cols, bound, rng));
}

ad::Var ZerosParam(Eigen::Index rows, Eigen::Index cols) {
  return ad::Parameter(ad::Matrix::Zero(rows, cols));
}

ad::Var OnesParam(Eigen::Index rows, Eigen::Index cols) {
  return ad::Parameter(ad::Matrix::Ones(rows, cols));
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t rows, int dim, Rng& rng) : dim_(dim) {
  const double bound = 0.5 / static_cast<double>(dim);
  rows_.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    rows_.push_back(ad::Parameter(UniformMatrix(dim, 1, bound, rng)));
  }
}

ad::Matrix EmbeddingTable::ToMatrix() const {
  ad::Matrix m(static_cast<Eigen::Index>(rows_.size()), dim_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = rows_[i].value().transpose();
  }
  return m;
}

void EmbeddingTable::AssignFromMatrix(const ad::Matrix& m) {
  if (m.rows() != static_cast<Eigen::Index>(rows_.size()) || m.cols() != dim_) {
    throw Error(ErrorClass::kLoad, "embedding table shape mismatch");
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    rows_[i].mutable_leaf_value() = m.row(static_cast<Eigen::Index>(i)).transpose();
  }
}

Parameters::Parameters(const ModelConfig& config, std::size_t num_entities,
                       std::size_t num_relations, std::uint64_t seed) {
  config.Validate();
  Rng rng(seed);
  const int d = config.dim;
  entities = EmbeddingTable(num_entities, d, rng);
  relations = EmbeddingTable(num_relations, d, rng);
  mask_token =
      ad::Parameter(UniformMatrix(d, 1, kResidualInitScale / std::sqrt(d), rng));

  background.w1 = Xavier(d, 2 * d, rng);
  background.b1 = ZerosParam(d, 1);
  background.w2 = Xavier(d, d, rng);
  background.u1 = Xavier(d, 1, rng);
  background.u2 = Xavier(d, 1, rng);
  background.b_g = ZerosParam(1, 1);
  scorer_w2 = config.share_w2 ? background.w2 : Xavier(d, d, rng);

  const int hidden = config.ffn_factor * d;
  for (int layer = 0; layer < config.gran_layers; ++layer) {
    GranBlockParams block;
    block.wq = Xavier(d, d, rng);
    block.wk = Xavier(d, d, rng);
    block.wv = Xavier(d, d, rng);
    block.wo = Xavier(d, d, rng);
    block.wo.mutable_leaf_value() *= kResidualInitScale;
    block.key_bias = ZerosParam(kNumEdgeLabels, d);
    block.value_bias = ZerosParam(kNumEdgeLabels, d);
    block.ln1_gamma = OnesParam(1, d);
    block.ln1_beta = ZerosParam(1, d);
    block.ln2_gamma = OnesParam(1, d);
    block.ln2_beta = ZerosParam(1, d);
    block.ffn_w1 = Xavier(d, hidden, rng);
    block.ffn_b1 = ZerosParam(1, hidden);
    block.ffn_w2 = Xavier(hidden, d, rng);
    block.ffn_w2.mutable_leaf_value() *= kResidualInitScale;
    block.ffn_b2 = ZerosParam(1, d);
    gran.blocks.push_back(std::move(block));
  }
}

std::vector<NamedTensor> Parameters::DenseTensors() const {
  std::vector<NamedTensor> out{
      {"mask_token", mask_token},
      {"background.w1", background.w1},
      {"background.b1", background.b1},
      {"background.w2", background.w2},
      {"background.u1", background.u1},
      {"background.u2", background.u2},
      {"background.b_g", background.b_g},
  };
  if (scorer_w2.node() != background.w2.node()) {
    out.push_back({"scorer.w2", scorer_w2});
  }
  for (std::size_t i = 0; i < gran.blocks.size(); ++i) {
    const GranBlockParams& b = gran.blocks[i];
    const std::string p = "gran." + std::to_string(i) + ".";
    out.push_back({p + "wq", b.wq});
    out.push_back({p + "wk", b.wk});
    out.push_back({p + "wv", b.wv});
    out.push_back({p + "wo", b.wo});
    out.push_back({p + "key_bias", b.key_bias});
    out.push_back({p + "value_bias", b.value_bias});
    out.push_back({p + "ln1_gamma", b.ln1_gamma});
    out.push_back({p + "ln1_beta", b.ln1_beta});
    out.push_back({p + "ln2_gamma", b.ln2_gamma});
    out.push_back({p + "ln2_beta", b.ln2_beta});
    out.push_back({p + "ffn_w1", b.ffn_w1});
    out.push_back({p + "ffn_b1", b.ffn_b1});
    out.push_back({p + "ffn_w2", b.ffn_w2});
    out.push_back({p + "ffn_b2", b.ffn_b2});
  }
  return out;
}

std::vector<ad::Var> Parameters::Leaves() const {
  std::vector<ad::Var> out(entities.rows().begin(), entities.rows().end());
  out.insert(out.end(), relations.rows().begin(), relations.rows().end());
  for (const NamedTensor& t : DenseTensors()) out.push_back(t.var);
  return out;
}

std::vector<ad::Matrix> Parameters::Snapshot() const {
  std::vector<ad::Matrix> out;
  for (const ad::Var& leaf : Leaves()) out.push_back(leaf.value());
  return out;
}

void Parameters::Restore(const std::vector<ad::Matrix>& snapshot) {
  std::vector<ad::Var> leaves = Leaves();
  if (leaves.size() != snapshot.size()) {
    throw Error(ErrorClass::kLoad, "parameter snapshot size mismatch");
  }
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    leaves[i].mutable_leaf_value() = snapshot[i];
  }
}

}  // namespace metarh::model
