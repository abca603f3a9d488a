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

#ifndef METARH_MODEL_BACKGROUND_ENCODER_H_
#define METARH_MODEL_BACKGROUND_ENCODER_H_

#include <span>
#include <utility>
#include <vector>

#include "metarh/autodiff/var.h"
#include "metarh/hkg/fact.h"
#include "metarh/model/config.h"
#include "metarh/model/parameters.h"

namespace metarh::model {

using QualifierVars = std::pair<ad::Var, ad::Var>;  // (attribute, value)

// Rotates `value`, read as dim/2 complex numbers (real parts first, then
// imaginary parts), by the phases held in the first dim/2 entries of
// `attribute`. Odd dims are a configuration error.
ad::Var Rotate(const ad::Var& attribute, const ad::Var& value);

// Sum of rotations over all qualifier pairs; zero vector when empty.
ad::Var QualifierSum(std::span<const QualifierVars> pairs, int dim);

// tau * relation + (1 - tau) * W2 * qualifiers.
ad::Var FuseRelation(const ad::Var& relation, const ad::Var& qualifiers,
                     double tau, const ad::Var& w2);

// W1 [fuse(r_b, q_b); t_b] + b1.
ad::Var FactRepresentation(const ad::Var& relation, const ad::Var& tail,
                           const ad::Var& qualifiers,
                           const BackgroundEncoderParams& params, double tau);

struct AttentionResult {
  ad::Var weights;  // L x 1, on the simplex
  ad::Var pooled;   // dim x 1
};

// Softmax over leaky-rectified U1 scores of each fact representation.
// `fact_reprs` must be non-empty.
AttentionResult Attend(std::span<const ad::Var> fact_reprs,
                       const BackgroundEncoderParams& params,
                       double leaky_slope);

// sigmoid(U2 . pooled + b_g), 1 x 1.
ad::Var Gate(const ad::Var& pooled, const BackgroundEncoderParams& params);

ad::Var Activate(const ad::Var& x, Activation activation, double leaky_slope);

// act(g * pooled + (1 - g) * entity); act(entity) without background facts.
ad::Var Enhance(const ad::Var& entity, std::span<const ad::Var> fact_reprs,
                const BackgroundEncoderParams& params,
                const ModelConfig& config);

// Qualifier representation of a fact from the raw embedding tables.
ad::Var FactQualifiers(const HyperFact& fact, const Parameters& params);

// Representation of one background fact (relation, tail, qualifiers).
ad::Var EncodeBackgroundFact(const HyperFact& fact, const Parameters& params,
                             const ModelConfig& config);

}  // namespace metarh::model

#endif  // METARH_MODEL_BACKGROUND_ENCODER_H_
