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

#ifndef METARH_MODEL_RELATION_ENCODER_H_
#define METARH_MODEL_RELATION_ENCODER_H_

#include <memory>
#include <span>
#include <vector>

#include "metarh/autodiff/var.h"
#include "metarh/common/rng.h"
#include "metarh/model/background_encoder.h"
#include "metarh/model/parameters.h"

namespace metarh::model {

// Heterogeneous edge labels of an instance graph [h, MASK, t, a1, v1, ...].
// Labels are symmetric.
enum EdgeLabel : int {
  kSelf = 0,
  kTripleSubject = 1,          // h - MASK
  kTripleObject = 2,           // MASK - t
  kQualAttributeOfTriple = 3,  // a_i - MASK
  kQualValueOfAttribute = 4,   // v_i - MASK
  kIntraQualifier = 5,         // a_i - v_i
  kCoQualifier = 6,            // a_i - a_j
  kUnconnected = 7,
};
inline constexpr int kNumEdgeLabels = 8;
inline constexpr int kMaskNode = 1;

struct InstanceGraph {
  std::vector<ad::Var> nodes;  // dim x 1 each
  std::shared_ptr<const ad::IndexMatrix> labels;

  std::size_t num_nodes() const { return nodes.size(); }
};

// Label matrix for an instance with `num_qualifiers` pairs.
ad::IndexMatrix EdgeLabels(int num_qualifiers);

InstanceGraph BuildInstanceGraph(const ad::Var& head, const ad::Var& mask,
                                 const ad::Var& tail,
                                 std::span<const QualifierVars> qualifiers);

struct GranOptions {
  int heads = 2;
  bool hard_mask = true;
  double dropout = 0.0;
  Rng* dropout_rng = nullptr;  // dropout is active only when set
};

// Runs the block stack and returns the final MASK node representation.
// Attention logits are q_i . (k_j + key_bias[label(i,j)]) / sqrt(d_head);
// values receive value_bias[label(i,j)].
ad::Var GranForward(const InstanceGraph& graph, const GranParams& params,
                    const GranOptions& options);

// Arithmetic mean of the per-instance relation representations.
ad::Var AverageSupport(std::span<const ad::Var> mask_reprs);

}  // namespace metarh::model

#endif  // METARH_MODEL_RELATION_ENCODER_H_
